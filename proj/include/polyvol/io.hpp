#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "polyvol/bodies.hpp"

namespace polyvol {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// cdd H-representation: rows "b  -a_1 ... -a_d" between begin/end.
HPolytope read_ine(std::istream& in);
void write_ine(std::ostream& out, const HPolytope& p, const std::string& name = "polytope");

// cdd V-representation: rows "1  v_1 ... v_d".
VPolytope read_ext(std::istream& in);
void write_ext(std::ostream& out, const VPolytope& p, const std::string& name = "polytope");

// First line "d k", then k rows of d reals, one generator per row.
Zonotope read_zonotope(std::istream& in);
void write_zonotope(std::ostream& out, const Zonotope& z);

/// Reads a file in the format selected by rep ("h", "v" or "z").
ConvexBody read_body_file(const std::string& path, const std::string& rep);
void write_body_file(const std::string& path, const ConvexBody& body, const std::string& name = "polytope");

}  // namespace polyvol
