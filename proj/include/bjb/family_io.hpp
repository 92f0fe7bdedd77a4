// Family construction from text: built-in names with parameters and
// explicit-table JSON files.
//
//   st:s=2,t=2,alpha=0.6
//   scalar-free
//   diagonal-test:a1=1,a2=4,c1=2,c2=8,alpha=0.6
//   file:path/to/family.json      (or any spec ending in .json)
//
// Every spec also accepts `shift=c` (B_n + cI for all n) and `b1shift=c` (B_1 + cI).
//
// Table file layout:
//   {"dim": 2, "edge_b": 0.0, "label": "...",
//    "blocks": [{"n": 1, "A": [0, 1, 1, 0], "B": [[2, 0], 0, 0, 2]}, ...]}
// A and B are row-major; each entry is a real number or a [re, im] pair.
#pragma once

#include <fstream>
#include <map>

#include <json.hpp>

#include "bjb/example_st.hpp"

namespace bjb {

namespace detail {

inline Complex json_scalar(const nlohmann::json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw DomainError("family file: matrix entry must be a number or a [re, im] pair");
}

inline BlockMatrix json_block(const nlohmann::json& v, std::size_t dim, const std::string& what) {
  if (!v.is_array() || v.size() != dim * dim)
    throw DomainError("family file: " + what + " must hold " + std::to_string(dim * dim) +
                      " row-major entries");
  BlockMatrix m(dim, dim);
  for (std::size_t i = 0; i < dim * dim; ++i) m(i / dim, i % dim) = json_scalar(v[i]);
  return m;
}

}  // namespace detail

inline OperatorFamily family_from_json(const nlohmann::json& j, const std::string& fallback_label) {
  if (!j.is_object()) throw DomainError("family file: top level must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw DomainError("family file: field 'dim' must be a positive integer");
  const auto dim = static_cast<std::size_t>(j["dim"].get<long long>());
  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
    throw DomainError("family file: field 'blocks' must be a non-empty array");

  std::map<std::size_t, std::pair<BlockMatrix, BlockMatrix>> rows;
  for (const auto& blk : j["blocks"]) {
    if (!blk.contains("n") || !blk["n"].is_number_integer() || blk["n"].get<long long>() < 1)
      throw DomainError("family file: every block needs a positive integer 'n'");
    const auto n = static_cast<std::size_t>(blk["n"].get<long long>());
    if (!blk.contains("A") || !blk.contains("B"))
      throw DomainError("family file: block n=" + std::to_string(n) + " needs 'A' and 'B'");
    auto a = detail::json_block(blk["A"], dim, "A at n=" + std::to_string(n));
    auto b = detail::json_block(blk["B"], dim, "B at n=" + std::to_string(n));
    if (!is_hermitian(b, 1e-12))
      throw DomainError("family file: B at n=" + std::to_string(n) + " is not Hermitian");
    if (!rows.emplace(n, std::make_pair(std::move(a), std::move(b))).second)
      throw DomainError("family file: duplicate block n=" + std::to_string(n));
  }
  std::vector<BlockMatrix> as, bs;
  std::size_t expect = 1;
  for (auto& [n, ab] : rows) {
    if (n != expect)
      throw DomainError("family file: blocks must cover n = 1.." + std::to_string(rows.size()) +
                        " without gaps (missing n=" + std::to_string(expect) + ")");
    as.push_back(std::move(ab.first));
    bs.push_back(std::move(ab.second));
    ++expect;
  }
  std::optional<double> edge;
  if (j.contains("edge_b") && !j["edge_b"].is_null()) {
    if (!j["edge_b"].is_number()) throw DomainError("family file: 'edge_b' must be a number");
    edge = j["edge_b"].get<double>();
  }
  const std::string label = j.value("label", fallback_label);
  return table_family(dim, std::move(as), std::move(bs), edge, label);
}

inline OperatorFamily load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open family file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("family file '" + path + "' is not valid JSON: " + e.what());
  }
  return family_from_json(j, path);
}

namespace detail {

inline std::map<std::string, double> parse_kv(const std::string& text, const std::string& spec) {
  std::map<std::string, double> kv;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = text.substr(pos, end - pos);
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw DomainError("family '" + spec + "': expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != val.size() || val.empty())
      throw DomainError("family '" + spec + "': value of '" + key + "' is not a number");
    kv[key] = x;
    pos = end + 1;
  }
  return kv;
}

inline double take(std::map<std::string, double>& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const double v = it->second;
  kv.erase(it);
  return v;
}

}  // namespace detail

/// Builds a family from a spec string (see file comment).
inline OperatorFamily family_from_spec(const std::string& spec) {
  if (spec.empty()) throw DomainError("empty family spec");
  const bool is_file = spec.rfind("file:", 0) == 0 ||
                       (spec.size() > 5 && spec.compare(spec.size() - 5, 5, ".json") == 0);
  if (is_file) return load_family_file(spec.rfind("file:", 0) == 0 ? spec.substr(5) : spec);

  const std::size_t colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  auto kv = colon == std::string::npos ? std::map<std::string, double>{}
                                       : detail::parse_kv(spec.substr(colon + 1), spec);
  const double shift = detail::take(kv, "shift", 0.0);
  const double b1shift = detail::take(kv, "b1shift", 0.0);

  OperatorFamily f;
  if (name == "st") {
    StParams p;
    p.s = detail::take(kv, "s", 2.0);
    p.t = detail::take(kv, "t", 2.0);
    p.alpha = detail::take(kv, "alpha", 0.5);
    f = st_family(p);
  } else if (name == "scalar-free") {
    f = scalar_free_family();
  } else if (name == "diagonal-test") {
    DiagonalTestParams p;
    p.a1 = detail::take(kv, "a1", p.a1);
    p.a2 = detail::take(kv, "a2", p.a2);
    p.c1 = detail::take(kv, "c1", p.c1);
    p.c2 = detail::take(kv, "c2", p.c2);
    p.alpha = detail::take(kv, "alpha", p.alpha);
    f = diagonal_test_family(p);
  } else if (name == "jc") {
    f = jc_family(detail::take(kv, "s", 2.0), detail::take(kv, "t", 2.0));
  } else {
    throw DomainError("unknown family '" + name +
                      "' (known: st, scalar-free, diagonal-test, jc, file:<path>)");
  }
  if (!kv.empty())
    throw DomainError("family '" + spec + "': unknown parameter '" + kv.begin()->first + "'");
  if (b1shift != 0.0) f = shift_first_diag(std::move(f), b1shift);
  if (shift != 0.0) f = shift_diag(std::move(f), shift);
  return f;
}

}  // namespace bjb
