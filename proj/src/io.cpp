#include "polyvol/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <vector>

namespace polyvol {

namespace {

double parse_number(const std::string& token, int line) {
  const auto slash = token.find('/');
  try {
    size_t used = 0;
    if (slash == std::string::npos) {
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      return v;
    }
    const double num = std::stod(token.substr(0, slash));
    const double den = std::stod(token.substr(slash + 1));
    if (den == 0.0) throw std::invalid_argument(token);
    return num / den;
  } catch (const std::exception&) {
    std::ostringstream msg;
    msg << "line " << line << ": cannot parse number '" << token << "'";
    throw ParseError(msg.str());
  }
}

std::vector<std::string> tokens_of(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

// Rows of a cdd begin ... end block.
Matrix read_cdd_block(std::istream& in) {
  std::string line;
  int line_no = 0;
  bool in_block = false;
  long rows = -1, cols = -1;
  std::vector<std::vector<double>> data;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = tokens_of(line);
    if (toks.empty() || toks[0][0] == '*') continue;
    if (!in_block) {
      if (toks[0] == "begin") in_block = true;
      else if (toks[0] == "linearity")
        throw ParseError("line " + std::to_string(line_no) + ": linearity sections are not supported");
      continue;
    }
    if (toks[0] == "end") break;
    if (rows < 0) {
      if (toks.size() < 2) throw ParseError("line " + std::to_string(line_no) + ": expected 'rows cols numtype'");
      rows = static_cast<long>(parse_number(toks[0], line_no));
      cols = static_cast<long>(parse_number(toks[1], line_no));
      if (rows < 1 || cols < 2) throw ParseError("line " + std::to_string(line_no) + ": bad block size");
      continue;
    }
    if (static_cast<long>(toks.size()) != cols) {
      std::ostringstream msg;
      msg << "line " << line_no << ": expected " << cols << " entries, found " << toks.size();
      throw ParseError(msg.str());
    }
    std::vector<double> row;
    row.reserve(toks.size());
    for (const auto& t : toks) row.push_back(parse_number(t, line_no));
    data.push_back(std::move(row));
  }
  if (!in_block) throw ParseError("missing 'begin'");
  if (rows < 0) throw ParseError("missing block size line");
  if (static_cast<long>(data.size()) != rows) {
    std::ostringstream msg;
    msg << "expected " << rows << " rows, found " << data.size();
    throw ParseError(msg.str());
  }
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j) m(i, j) = data[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return m;
}

template <class F>
auto rethrow_as_parse(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

void write_real(std::ostream& out, double v) {
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
}

}  // namespace

HPolytope read_ine(std::istream& in) {
  const Matrix m = read_cdd_block(in);
  return rethrow_as_parse([&] { return HPolytope(-m.rightCols(m.cols() - 1), m.col(0)); });
}

void write_ine(std::ostream& out, const HPolytope& p, const std::string& name) {
  out << name << "\nH-representation\nbegin\n " << p.num_facets() << ' ' << p.dim() + 1 << " real\n";
  for (int i = 0; i < p.num_facets(); ++i) {
    out << ' ';
    write_real(out, p.b[i]);
    for (int j = 0; j < p.dim(); ++j) {
      out << ' ';
      write_real(out, p.a(i, j) == 0.0 ? 0.0 : -p.a(i, j));
    }
    out << '\n';
  }
  out << "end\n";
}

VPolytope read_ext(std::istream& in) {
  const Matrix m = read_cdd_block(in);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    if (m(i, 0) != 1.0) throw ParseError("row " + std::to_string(i + 1) + ": only vertices (leading 1) are supported");
  return rethrow_as_parse([&] { return VPolytope(m.rightCols(m.cols() - 1)); });
}

void write_ext(std::ostream& out, const VPolytope& p, const std::string& name) {
  out << name << "\nV-representation\nbegin\n " << p.num_vertices() << ' ' << p.dim() + 1 << " real\n";
  for (int i = 0; i < p.num_vertices(); ++i) {
    out << " 1";
    for (int j = 0; j < p.dim(); ++j) {
      out << ' ';
      write_real(out, p.vertices(i, j));
    }
    out << '\n';
  }
  out << "end\n";
}

Zonotope read_zonotope(std::istream& in) {
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    for (const auto& t : tokens_of(line)) values.push_back(parse_number(t, line_no));
  }
  if (values.size() < 2) throw ParseError("zonotope file: missing 'd k' header");
  const double d_raw = values[0], k_raw = values[1];
  if (d_raw < 1 || k_raw < 1 || d_raw != static_cast<long>(d_raw) || k_raw != static_cast<long>(k_raw))
    throw ParseError("zonotope file: bad 'd k' header");
  const auto d = static_cast<Eigen::Index>(d_raw);
  const auto k = static_cast<Eigen::Index>(k_raw);
  if (static_cast<Eigen::Index>(values.size()) != 2 + d * k) {
    std::ostringstream msg;
    msg << "zonotope file: expected " << d * k << " generator entries, found " << values.size() - 2;
    throw ParseError(msg.str());
  }
  Matrix g(d, k);
  for (Eigen::Index j = 0; j < k; ++j)
    for (Eigen::Index i = 0; i < d; ++i) g(i, j) = values[static_cast<size_t>(2 + j * d + i)];
  return rethrow_as_parse([&] { return Zonotope(std::move(g)); });
}

void write_zonotope(std::ostream& out, const Zonotope& z) {
  out << z.dim() << ' ' << z.num_generators() << '\n';
  for (int j = 0; j < z.num_generators(); ++j) {
    for (int i = 0; i < z.dim(); ++i) {
      if (i) out << ' ';
      write_real(out, z.generators(i, j));
    }
    out << '\n';
  }
}

ConvexBody read_body_file(const std::string& path, const std::string& rep) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  if (rep == "h") return read_ine(in);
  if (rep == "v") return read_ext(in);
  if (rep == "z") return read_zonotope(in);
  throw ParseError("unknown representation '" + rep + "'");
}

void write_body_file(const std::string& path, const ConvexBody& body, const std::string& name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  if (const auto* h = std::get_if<HPolytope>(&body)) write_ine(out, *h, name);
  else if (const auto* v = std::get_if<VPolytope>(&body)) write_ext(out, *v, name);
  else if (const auto* z = std::get_if<Zonotope>(&body)) write_zonotope(out, *z);
  else throw std::invalid_argument("write_body_file: balls have no file format");
}

}  // namespace polyvol
