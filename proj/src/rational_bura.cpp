#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fracpow/rational.hpp"

#ifndef FRACPOW_DATA_DIR
#define FRACPOW_DATA_DIR "data"
#endif

namespace fracpow {

PartialFractionRational bura_convert(double alpha, double c0, const std::vector<PoleTerm>& trg) {
  PartialFractionRational r;
  r.alpha = alpha;
  r.kind = RationalKind::BestUniform;
  r.method = "bura";
  double atZero = c0;
  for (const auto& t : trg) {
    if (!(t.pole < 0.0)) throw TableRejected("table pole d_i must be negative");
    if (!(t.residue < 0.0)) throw TableRejected("table residue c_i must be negative");
    atZero -= t.residue / t.pole;
    r.terms.push_back({-t.residue / (t.pole * t.pole), 1.0 / t.pole});
  }
  r.c0 = atZero;
  if (!(r.c0 > 0.0))
    throw TableRejected("converted constant r(0) = " + std::to_string(r.c0) + " is not positive");
  // All residues of one sign force exactly one zero between consecutive poles,
  // so the sign checks above are the interlacing check.
  try {
    return make_rational(std::move(r));
  } catch (const PoleError& e) {
    throw TableRejected(std::string("converted table invalid: ") + e.what());
  }
}

BuraTable bura_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  BuraTable out;
  TableForm form = TableForm::Reciprocal;
  std::vector<std::string> body;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    std::string t = line.substr(first);
    if (t[0] == '#') {
      const auto pos = t.find("max error E =");
      if (pos != std::string::npos) out.declaredError = std::strtod(t.c_str() + pos + 13, nullptr);
      continue;
    }
    if (t.rfind("format", 0) == 0) {
      std::istringstream ts(t);
      std::string kw, value;
      ts >> kw >> value;
      if (value == "trg") form = TableForm::BestPower;
      else if (value == "reciprocal") form = TableForm::Reciprocal;
      else throw TableRejected("unknown format tag '" + value + "'");
      continue;
    }
    body.push_back(t);
  }
  if (body.empty()) throw TableRejected("coefficient table has no header line");
  std::istringstream head(body[0]);
  double alpha, c0, prefactor, scale;
  long k;
  if (!(head >> alpha >> k >> c0 >> prefactor >> scale))
    throw TableRejected("malformed header: expected 'alpha k c0 prefactor matrixScale'");
  if (!(alpha > 0.0 && alpha < 1.0)) throw TableRejected("alpha out of (0,1)");
  if (k < 0 || static_cast<std::size_t>(k) + 1 != body.size())
    throw TableRejected("term count does not match the header");
  std::vector<PoleTerm> terms;
  for (long i = 1; i <= k; ++i) {
    std::istringstream ls(body[i]);
    double c, d;
    if (!(ls >> c >> d)) throw TableRejected("malformed term line " + std::to_string(i));
    terms.push_back({c, d});
  }
  out.sourceForm = form;
  if (form == TableForm::BestPower) {
    out.rational = bura_convert(alpha, c0, terms);
  } else {
    PartialFractionRational r;
    r.alpha = alpha;
    r.c0 = c0;
    r.terms = terms;
    r.kind = RationalKind::BestUniform;
    r.method = "bura";
    try {
      out.rational = make_rational(std::move(r));
    } catch (const PoleError& e) {
      throw TableRejected(std::string("sign pattern violated: ") + e.what());
    }
  }
  out.rational.prefactor = prefactor;
  out.rational.matrixScale = scale;
  if (!(scale > 0.0)) throw TableRejected("matrixScale must be positive");
  return out;
}

BuraTable bura_from_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TableRejected("cannot open coefficient table " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return bura_from_text(ss.str());
}

std::string data_directory() {
  if (const char* env = std::getenv("FRACPOW_DATA")) return env;
  return FRACPOW_DATA_DIR;
}

std::string bura_table_path(double alpha, int k) {
  int code;
  if (std::abs(alpha - 0.25) < 1e-12) code = 25;
  else if (std::abs(alpha - 0.5) < 1e-12) code = 50;
  else if (std::abs(alpha - 0.75) < 1e-12) code = 75;
  else throw DomainError("no built-in BURA table for alpha = " + std::to_string(alpha));
  if (k < 1 || k > 8) throw DomainError("built-in BURA tables cover k = 1..8");
  char name[64];
  std::snprintf(name, sizeof name, "/bura/bura_a%03d_k%d.txt", code, k);
  return data_directory() + name;
}

}  // namespace fracpow
