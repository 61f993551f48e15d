#include "fracpow/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracpow/discretize.hpp"

namespace fracpow {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

static std::string slurp(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

static void dump(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << text;
  if (!f) throw Error("write failed for " + path);
}

std::string format_rational(const PartialFractionRational& r) {
  std::ostringstream os;
  os << format_double(r.alpha) << ' ' << r.terms.size() << ' ' << format_double(r.c0) << ' '
     << format_double(r.prefactor) << ' ' << format_double(r.matrixScale) << '\n';
  for (const auto& t : r.terms) os << format_double(t.residue) << ' ' << format_double(t.pole) << '\n';
  return os.str();
}

PartialFractionRational parse_rational(const std::string& text, RationalKind kind) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    body.push_back(line.substr(first));
  }
  if (body.empty()) throw Error("empty coefficient file");
  std::istringstream head(body[0]);
  PartialFractionRational r;
  long k;
  if (!(head >> r.alpha >> k >> r.c0 >> r.prefactor >> r.matrixScale))
    throw Error("malformed coefficient header");
  if (k < 0 || static_cast<std::size_t>(k) + 1 != body.size())
    throw Error("coefficient term count does not match the header");
  for (long i = 1; i <= k; ++i) {
    std::istringstream ls(body[i]);
    PoleTerm t;
    if (!(ls >> t.residue >> t.pole)) throw Error("malformed coefficient line");
    r.terms.push_back(t);
  }
  r.kind = kind;
  return make_rational(std::move(r));
}

void write_rational(const std::string& path, const PartialFractionRational& r) {
  dump(path, format_rational(r));
}

PartialFractionRational read_rational(const std::string& path, RationalKind kind) {
  return parse_rational(slurp(path), kind);
}

void write_matrix_market(const std::string& path, const DiscreteOperator& op) {
  const auto& S = op.stiffness();
  std::ostringstream os;
  os << "%%MatrixMarket matrix coordinate real symmetric\n";
  std::size_t lower = 0;
  for (int i = 0; i < S.size(); ++i)
    for (int p = S.rowPtr()[i]; p < S.rowPtr()[i + 1]; ++p)
      if (S.colIdx()[p] <= i) ++lower;
  os << S.size() << ' ' << S.size() << ' ' << lower << '\n';
  for (int i = 0; i < S.size(); ++i)
    for (int p = S.rowPtr()[i]; p < S.rowPtr()[i + 1]; ++p)
      if (S.colIdx()[p] <= i)
        os << i + 1 << ' ' << S.colIdx()[p] + 1 << ' ' << format_double(S.values()[p]) << '\n';
  dump(path, os.str());

  std::ostringstream meta;
  meta << "# fracpow operator sidecar\n";
  meta << "dimension " << op.dimension() << '\n';
  meta << "lambdaMin " << format_double(op.lambdaMin()) << '\n';
  meta << "lambdaMax " << format_double(op.lambdaMax()) << '\n';
  meta << "boundsSource " << toString(op.boundsSource()) << '\n';
  meta << "massDiag\n";
  for (double d : op.massDiag()) meta << format_double(d) << '\n';
  dump(path + ".meta", meta.str());
}

CsrMatrix read_matrix_market_stiffness(const std::string& path) {
  std::istringstream in(slurp(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("%%MatrixMarket", 0) != 0)
    throw Error("missing MatrixMarket banner in " + path);
  std::istringstream banner(line);
  std::string mm, object, format, field, symmetry;
  banner >> mm >> object >> format >> field >> symmetry;
  if (object != "matrix" || format != "coordinate")
    throw Error("only coordinate matrices are supported");
  if (field != "real" && field != "integer") throw Error("only real matrices are supported");
  const bool sym = symmetry == "symmetric";
  if (!sym && symmetry != "general") throw Error("unsupported symmetry '" + symmetry + "'");
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '%') break;
  std::istringstream sz(line);
  long rows, cols, nnz;
  if (!(sz >> rows >> cols >> nnz) || rows != cols) throw Error("matrix must be square");
  std::vector<Triplet> t;
  t.reserve(sym ? 2 * nnz : nnz);
  for (long k = 0; k < nnz; ++k) {
    long i, j;
    double v;
    if (!(in >> i >> j >> v)) throw Error("truncated MatrixMarket data");
    t.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    if (sym && i != j) t.push_back({static_cast<int>(j - 1), static_cast<int>(i - 1), v});
  }
  return CsrMatrix::fromTriplets(static_cast<int>(rows), std::move(t));
}

DiscreteOperator read_matrix_market(const std::string& path) {
  CsrMatrix S = read_matrix_market_stiffness(path);
  const int n = S.size();
  std::ifstream meta(path + ".meta");
  Vec D(n, 1.0);
  double lo = -1.0, hi = -1.0;
  if (meta) {
    std::string key;
    while (meta >> key) {
      if (key[0] == '#') {
        std::string rest;
        std::getline(meta, rest);
      } else if (key == "lambdaMin") {
        meta >> lo;
      } else if (key == "lambdaMax") {
        meta >> hi;
      } else if (key == "massDiag") {
        for (int i = 0; i < n; ++i)
          if (!(meta >> D[i])) throw Error("sidecar mass diagonal too short");
      } else {
        std::string rest;
        std::getline(meta, rest);
      }
    }
  }
  if (lo > 0.0 && hi >= lo) return DiscreteOperator(std::move(S), std::move(D), lo, hi);
  if (n > kDenseBoundsLimit) throw Error("no spectral bounds in sidecar and matrix too large for a dense solve");
  DiscreteOperator tmp(std::move(S), std::move(D), 1.0, 1.0);
  Vec ev = dense_eigenvalues(tmp);
  if (!(ev.front() > 0.0)) throw DomainError("matrix is not positive definite");
  return tmp.withBounds(ev.front(), ev.back(), BoundsSource::Dense);
}

void write_vector(const std::string& path, const Vec& v) {
  std::ostringstream os;
  for (double x : v) os << format_double(x) << '\n';
  dump(path, os.str());
}

Vec read_vector(const std::string& path) {
  std::istringstream in(slurp(path));
  Vec v;
  std::string tok;
  while (in >> tok) {
    char* end = nullptr;
    const double x = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw Error("bad number '" + tok + "' in " + path);
    v.push_back(x);
  }
  return v;
}

}  // namespace fracpow
