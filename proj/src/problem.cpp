#include "barnorm/problem.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "barnorm/error.hpp"
#include "barnorm/polygon.hpp"

namespace barnorm {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::schema, field + ": " + what);
}

std::string type_of(const json& j) { return j.type_name(); }

double number_at(const json& j, const std::string& field) {
  if (!j.is_number()) schema_error(field, "expected a number, got " + type_of(j));
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(field, "number is not finite");
  return v;
}

int integer_at(const json& j, const std::string& field, int min_value) {
  if (!j.is_number_integer()) schema_error(field, "expected an integer, got " + type_of(j));
  const auto v = j.get<long long>();
  if (v < min_value || v > 1'000'000'000) {
    schema_error(field, "must be in [" + std::to_string(min_value) + ", 1e9], got " +
                            std::to_string(v));
  }
  return static_cast<int>(v);
}

std::string string_at(const json& j, const std::string& field) {
  if (!j.is_string()) schema_error(field, "expected a string, got " + type_of(j));
  return j.get<std::string>();
}

Vec2 vec2_at(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2) schema_error(field, "expected a pair [x, y]");
  return {number_at(j[0], field + "[0]"), number_at(j[1], field + "[1]")};
}

Mat2 matrix_at(const json& j, const std::string& field) {
  if (!j.is_array()) schema_error(field, "expected an array, got " + type_of(j));
  if (!j.empty() && j[0].is_array()) {
    // Nested rows.
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!j[r].is_array()) schema_error(field, "mixes nested rows and plain numbers");
      cols = std::max(cols, j[r].size());
      if (j[r].size() != j[0].size()) schema_error(field, "rows have different lengths");
    }
    if (rows != 2 || cols != 2) {
      schema_error(field, "dimension error: expected a 2x2 matrix, got " + std::to_string(rows) +
                              "x" + std::to_string(cols));
    }
    const std::string r0 = field + "[0]", r1 = field + "[1]";
    return {number_at(j[0][0], r0 + "[0]"), number_at(j[0][1], r0 + "[1]"),
            number_at(j[1][0], r1 + "[0]"), number_at(j[1][1], r1 + "[1]")};
  }
  if (j.size() != 4) {
    schema_error(field, "dimension error: expected 4 row-major entries, got " +
                            std::to_string(j.size()));
  }
  double e[4];
  for (std::size_t i = 0; i < 4; ++i) e[i] = number_at(j[i], field + "[" + std::to_string(i) + "]");
  return {e[0], e[1], e[2], e[3]};
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

const std::set<std::string> kKnownKeys = {"matrices", "algorithm", "gamma",     "tol",
                                          "max_iter", "e",         "n",         "rho",
                                          "seed_ball", "prune_eps", "name",     "description"};

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::max_relax:
      return "max-relax";
    case Algorithm::chr:
      return "chr";
    case Algorithm::seeded_bar:
      return "seeded-bar";
    case Algorithm::seeded_dk:
      return "seeded-dk";
    case Algorithm::brute:
      return "brute";
    case Algorithm::lmain:
      return "lmain";
    case Algorithm::automatic:
      return "auto";
  }
  return "auto";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : {Algorithm::max_relax, Algorithm::chr, Algorithm::seeded_bar,
                      Algorithm::seeded_dk, Algorithm::brute, Algorithm::lmain,
                      Algorithm::automatic}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

std::optional<Averaging> parse_averaging(std::string_view name) {
  if (name == "arith" || name == "arithmetic") return Averaging::arithmetic;
  if (name == "geom" || name == "geometric") return Averaging::geometric;
  if (name == "harm" || name == "harmonic") return Averaging::harmonic;
  return std::nullopt;
}

Problem parse_problem(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte);
    std::string what = e.what();
    // Drop the library's "[json.exception.parse_error.101] parse error at ...:" prefix.
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw Error(ErrorKind::parse, std::string(origin) + ":" + std::to_string(line) + ":" +
                                      std::to_string(col) + ": " + what);
  }
  if (!doc.is_object()) schema_error("$", "top level must be an object, got " + type_of(doc));
  for (const auto& [key, value] : doc.items()) {
    if (!kKnownKeys.count(key)) schema_error(key, "unknown field");
  }

  Problem p;
  p.source = std::string(origin);
  if (!doc.contains("matrices")) schema_error("matrices", "required field is missing");
  const json& mats = doc["matrices"];
  if (!mats.is_array()) schema_error("matrices", "expected an array, got " + type_of(mats));
  if (mats.empty()) schema_error("matrices", "must contain at least one matrix");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    p.matrices.push_back(matrix_at(mats[i], "matrices[" + std::to_string(i) + "]"));
  }

  if (doc.contains("algorithm")) {
    const std::string name = string_at(doc["algorithm"], "algorithm");
    const auto a = parse_algorithm(name);
    if (!a) schema_error("algorithm", "unknown algorithm '" + name + "'");
    p.algorithm = *a;
  }
  if (doc.contains("gamma")) {
    const std::string name = string_at(doc["gamma"], "gamma");
    const auto rule = parse_averaging(name);
    if (!rule) schema_error("gamma", "unknown averaging rule '" + name + "'");
    p.config.rule = *rule;
  }
  if (doc.contains("tol")) {
    p.config.tol = number_at(doc["tol"], "tol");
    if (!(p.config.tol > 0.0)) schema_error("tol", "must be positive");
  }
  if (doc.contains("max_iter")) p.config.max_iter = integer_at(doc["max_iter"], "max_iter", 1);
  if (doc.contains("e")) {
    p.config.e = vec2_at(doc["e"], "e");
    if (p.config.e.x == 0.0 && p.config.e.y == 0.0) schema_error("e", "must be nonzero");
  }
  if (doc.contains("prune_eps")) {
    p.config.prune_eps = number_at(doc["prune_eps"], "prune_eps");
    if (p.config.prune_eps < 0.0) schema_error("prune_eps", "must be nonnegative");
  }
  if (doc.contains("n")) p.order = integer_at(doc["n"], "n", 1);
  if (doc.contains("rho")) {
    p.rho = number_at(doc["rho"], "rho");
    if (!(*p.rho > 0.0)) schema_error("rho", "must be positive");
  }
  if (doc.contains("seed_ball")) {
    const json& sb = doc["seed_ball"];
    if (!sb.is_array()) schema_error("seed_ball", "expected an array of [x, y] vertices");
    std::vector<Vec2> v;
    for (std::size_t i = 0; i < sb.size(); ++i) {
      v.push_back(vec2_at(sb[i], "seed_ball[" + std::to_string(i) + "]"));
    }
    try {
      (void)SymPolygon::from_vertices(v);
    } catch (const Error& e) {
      schema_error("seed_ball", e.what());
    }
    p.seed_ball = std::move(v);
  }
  return p;
}

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open problem file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::io, "error reading problem file '" + path.string() + "'");
  return parse_problem(buf.str(), path.string());
}

}  // namespace barnorm
