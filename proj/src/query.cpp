#include "mcbr24/query.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "mcbr24/errors.hpp"

namespace mcbr {

namespace {

constexpr std::string_view kSystemPrompt =
    "You are a student taking a test to solve a Math-24 puzzle. A Math-24 puzzle requires you to use 4 numbers "
    "to make 24. Each number must be used exactly once, and may use the + - * / operators. Once you have solved "
    "the puzzle, you must end your answer with \"Final Answer: [LHS] = 24\" where [LHS] is uses ALL 4 numbers "
    "EXACTLY once to get to 24. For example, if the puzzle is 1 2 9 13 then ending with \"Final Answer: (13 + 9 + "
    "2) * 1 = 24\" will get you full marks. If you end your answer using any other convention you will get no "
    "marks, even if your final answer is correct. For example, if you end with \"Final Answer: (13+9+2)=24; "
    "24*1=24\", this will get you no marks because your format is wrong, even though your answer is correct. If "
    "you end with \"Final Answer: (13 + 9 + 2) = 24\", this will also get you no marks because you have omitted "
    "the 1, even though your answer is correct. When giving your final answer, do not use any special formatting "
    "such as bold or italics, latex, etc. You must use only plain text.";

constexpr std::string_view kGeneralPlan =
    "a) use a pair of numbers to make 24, 12, 8 or 6\n"
    "b) use the remaining pair of numbers to make 1, 2, 3 or 4 respectively\n"
    "c) then the product of step a) and step b) equals 24";

std::string question(const Puzzle& p, bool bare) {
  // The bare question keeps a trailing space after the colon.
  return std::string("START QUESTION\nSolve the following Math-24 puzzle:") + (bare ? " " : "") + "\n" + p.text() +
         "\nEND QUESTION";
}

std::string context(std::string_view body) {
  return "START CONTEXT\nTo help you answer the question, below is a tip that may help:\n" + std::string(body) +
         "\nEND CONTEXT";
}

std::string tip_text(const Tip& t) {
  const std::string large = std::to_string(t.large_target);
  const std::string small = std::to_string(t.small_target);
  return "a) use the pair (" + std::to_string(t.suggested_pair[0]) + ", " + std::to_string(t.suggested_pair[1]) +
         ") to make " + large + ". If this is impossible, try to make " + large + " using some other pair\n" +
         "b) then use the remaining pair to make " + small + "\n" + "c) then " + large + " * " + small + " = 24";
}

}  // namespace

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::kNC: return "NC";
    case QueryKind::kGC: return "GC";
    case QueryKind::kTC: return "TC";
  }
  return "?";
}

QueryKind parse_query_kind(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  if (upper == "NC") return QueryKind::kNC;
  if (upper == "GC") return QueryKind::kGC;
  if (upper == "TC") return QueryKind::kTC;
  throw ConfigError("unknown query kind '" + std::string(text) + "' (expected NC, GC or TC)");
}

Tip derive_tip(const Puzzle& test_puzzle, const Solution& retrieved_solution) {
  return Tip{{test_puzzle.at(retrieved_solution.large_positions[0]), test_puzzle.at(retrieved_solution.large_positions[1])},
             retrieved_solution.category.large,
             retrieved_solution.category.small};
}

bool tip_admits_solution(const Puzzle& test_puzzle, const Tip& tip) {
  for (int i = 1; i <= 4; ++i) {
    for (int j = i + 1; j <= 4; ++j) {
      std::array<int, 2> rest{};
      for (int p = 1, n = 0; p <= 4; ++p) {
        if (p != i && p != j) rest[static_cast<std::size_t>(n++)] = test_puzzle.at(p);
      }
      if (pair_achieves(test_puzzle.at(i), test_puzzle.at(j), tip.large_target) &&
          pair_achieves(rest[0], rest[1], tip.small_target)) {
        return true;
      }
    }
  }
  return false;
}

std::string_view system_prompt() { return kSystemPrompt; }

PromptBundle build_query(QueryKind kind, const Puzzle& test_puzzle, const Case* retrieved) {
  PromptBundle b{kind, test_puzzle, std::string(kSystemPrompt), {}, {}};
  switch (kind) {
    case QueryKind::kNC:
      b.user = question(test_puzzle, true);
      break;
    case QueryKind::kGC:
      b.user = question(test_puzzle, false) + "\n\n" + context(kGeneralPlan);
      break;
    case QueryKind::kTC: {
      if (!retrieved) throw MissingRetrievedCase("a TC query needs a retrieved case");
      std::vector<Solution> sols = retrieved->solutions;
      std::stable_sort(sols.begin(), sols.end(), [](const Solution& a, const Solution& c) {
        if (a.large_positions != c.large_positions) return a.large_positions < c.large_positions;
        return category_index(a.category.id) < category_index(c.category.id);
      });
      std::string body;
      for (const Solution& s : sols) {
        b.tips.push_back(derive_tip(test_puzzle, s));
        if (!body.empty()) body += "\nOR\n";
        body += tip_text(b.tips.back());
      }
      b.user = question(test_puzzle, false) + "\n\n" + context(body);
      break;
    }
  }
  return b;
}

std::optional<std::string> parse_final_answer(std::string_view text) {
  static const std::regex kLine(R"(Final Answer:\s*([^=\n]*[^=\s])\s*=\s*24\s*$)");
  std::optional<std::string> last;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string line(text.substr(start, end - start));
    std::smatch m;
    if (std::regex_search(line, m, kLine)) last = m[1].str();
    start = end + 1;
  }
  if (last) {
    const auto first = last->find_first_not_of(" \t\r");
    *last = first == std::string::npos ? std::string() : last->substr(first);
  }
  return last;
}

}  // namespace mcbr
