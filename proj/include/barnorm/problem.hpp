#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "barnorm/linalg.hpp"
#include "barnorm/relaxation.hpp"

namespace barnorm {

enum class Algorithm { max_relax, chr, seeded_bar, seeded_dk, brute, lmain, automatic };

std::string to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view name);
/// Accepts arith|geom|harm and the long forms arithmetic|geometric|harmonic.
std::optional<Averaging> parse_averaging(std::string_view name);

struct Problem {
  std::vector<Mat2> matrices;
  Algorithm algorithm = Algorithm::automatic;
  RunConfig config;
  int order = 6;  // n for brute and lmain
  std::optional<double> rho;
  std::optional<std::vector<Vec2>> seed_ball;
  std::string source = "<memory>";
};

/// Parses and validates a problem document. Throws Error(parse) with the line
/// and column of malformed JSON and Error(schema) naming the offending field.
Problem parse_problem(std::string_view text, std::string_view origin = "<memory>");

/// Throws Error(io) when the file cannot be read.
Problem load_problem(const std::filesystem::path& path);

}  // namespace barnorm
