#pragma once

#include <bitset>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace algsim {

// Which matcher services inspection-time pattern checks. The backtracking
// matcher explores alternatives depth first and can take time exponential
// in the input length on pathological pattern/input pairs. The budgeted
// matcher simulates all alternatives breadth first; its work is bounded by
// program_size * (input_length + 1) state insertions and it additionally
// honours an explicit step budget.
enum class RegexEngine { Backtracking, Budgeted };

std::string_view regex_engine_name(RegexEngine engine);
RegexEngine regex_engine_from_name(std::string_view name);

struct MatchResult {
  bool matched = false;
  std::int64_t steps = 0;
};

// A compiled search pattern. Supported syntax: literals, '.', character
// classes '[a-z]' / '[^...]', alternation '|', grouping '(...)',
// quantifiers '*' '+' '?', anchors '^' '$', and backslash escapes. Both
// matchers perform an unanchored substring search. Compilation rejects
// programs longer than 64 instructions.
class Pattern {
 public:
  // Throws PatternSyntaxError with a 1-based position on bad syntax.
  static Pattern compile(std::string_view text);

  const std::string& text() const { return text_; }
  // Unambiguous rendering of the parsed pattern. Recompiling the canonical
  // form yields the same canonical form again.
  const std::string& canonical() const { return canonical_; }
  std::size_t program_size() const { return program_.size(); }

  // Depth-first search with no step bound. An epsilon-progress guard prunes
  // empty loop iterations, so every pattern terminates, but the number of
  // explored paths (and thus `steps`) can still grow exponentially with the
  // input length. `steps` counts executed instructions.
  MatchResult search_backtracking(std::string_view input) const;

  // Breadth-first state-set search. `steps` counts state insertions, which
  // never exceed program_size() * (input.size() + 1). Returns nullopt if the
  // budget is exhausted before a result is known.
  std::optional<MatchResult> search_budgeted(std::string_view input,
                                             std::int64_t budget) const;

 private:
  enum class Op : std::uint8_t {
    Char,
    Any,
    Class,
    Match,
    Jmp,
    Split,
    Caret,
    Dollar
  };

  struct Inst {
    Op op = Op::Match;
    unsigned char ch = 0;
    std::uint16_t x = 0;
    std::uint16_t y = 0;
  };

  Pattern() = default;

  std::string text_;
  std::string canonical_;
  std::vector<Inst> program_;
  std::vector<std::bitset<256>> classes_;

  friend class PatternBuilder;
};

}  // namespace algsim
