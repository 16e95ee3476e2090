#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcbr24/case_repository.hpp"
#include "mcbr24/math24.hpp"

namespace mcbr {

enum class QueryKind { kNC, kGC, kTC };

std::string_view to_string(QueryKind kind);
QueryKind parse_query_kind(std::string_view text);  // "NC" | "GC" | "TC", any case

// Execution plan taken from one retrieved solution: make `large_target` from
// `suggested_pair`, then `small_target` from the remaining two numbers.
struct Tip {
  std::array<int, 2> suggested_pair;  // test-puzzle numbers, in position order
  int large_target;
  int small_target;

  friend bool operator==(const Tip&, const Tip&) = default;
};

Tip derive_tip(const Puzzle& test_puzzle, const Solution& retrieved_solution);

// True iff some pair of the test puzzle makes the large target and the other
// two numbers make the small target. The suggested pair is a hint only: the
// tip text itself allows falling back to any other pair.
bool tip_admits_solution(const Puzzle& test_puzzle, const Tip& tip);

// The fixed system prompt shared by all query kinds.
std::string_view system_prompt();

struct PromptBundle {
  QueryKind kind;
  Puzzle puzzle;
  std::string system;
  std::string user;
  std::vector<Tip> tips;  // TC only, in the order they appear in `user`
};

// TC requires `retrieved` (throws MissingRetrievedCase); NC and GC ignore it.
// TC emits one tip per retrieved solution, ordered by large positions, then
// category.
PromptBundle build_query(QueryKind kind, const Puzzle& test_puzzle, const Case* retrieved = nullptr);

// LHS of the last line ending in "Final Answer: <expr> = 24"; nullopt if no
// line follows that convention.
std::optional<std::string> parse_final_answer(std::string_view text);

}  // namespace mcbr
