#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fmf/formula.hpp"
#include "fmf/logic.hpp"

namespace fmf {

enum class Dialect { Typed, Untyped, Auto };

struct ParseError : std::runtime_error {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column)
      : std::runtime_error(msg + " at " + std::to_string(line) + ":" +
                           std::to_string(column)),
        line(line),
        column(column) {}
};

struct ParseResult {
  Signature signature;
  std::vector<SourceFormula> formulas;
};

// Reads the typed (tff) or untyped (fof/cnf) TPTP subset documented in the
// README. The typed dialect reads sort and typed symbol declarations; the
// untyped dialect assigns every symbol the single default sort. The
// meta-predicate $distinct(t1,...,tk) expands to pairwise disequalities.
// Auto picks the dialect from the first annotated formula.
ParseResult parse(std::string_view text, Dialect dialect = Dialect::Auto);

ParseResult parse_file(const std::string& path, Dialect dialect = Dialect::Auto);

}  // namespace fmf
