#include "algsim/pattern.hpp"

#include <memory>

#include "algsim/errors.hpp"

namespace algsim {

std::string_view regex_engine_name(RegexEngine engine) {
  return engine == RegexEngine::Backtracking ? "backtracking" : "budgeted";
}

RegexEngine regex_engine_from_name(std::string_view name) {
  if (name == "backtracking") return RegexEngine::Backtracking;
  if (name == "budgeted") return RegexEngine::Budgeted;
  throw ConfigError("", "unknown regex engine '" + std::string(name) +
                            "', expected 'backtracking' or 'budgeted'");
}

namespace {

constexpr std::size_t kMaxProgram = 64;
constexpr std::string_view kMetaChars = ".*+?|()[]^$\\";

struct Node {
  enum class Kind {
    Empty,
    Char,
    Any,
    Class,
    Caret,
    Dollar,
    Cat,
    Alt,
    Star,
    Plus,
    Quest
  };
  Kind kind = Kind::Empty;
  unsigned char ch = 0;
  std::bitset<256> cls;
  std::unique_ptr<Node> left;
  std::unique_ptr<Node> right;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make_node(Node::Kind kind) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto node = parse_alt();
    if (pos_ != text_.size()) fail("unmatched ')'");
    return node;
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw PatternSyntaxError(pos_ + 1, message);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  NodePtr parse_alt() {
    auto node = parse_cat();
    while (!at_end() && peek() == '|') {
      ++pos_;
      auto alt = make_node(Node::Kind::Alt);
      alt->left = std::move(node);
      alt->right = parse_cat();
      node = std::move(alt);
    }
    return node;
  }

  NodePtr parse_cat() {
    auto node = make_node(Node::Kind::Empty);
    bool have_any = false;
    while (!at_end() && peek() != '|' && peek() != ')') {
      auto piece = parse_repeat();
      if (!have_any) {
        node = std::move(piece);
        have_any = true;
      } else {
        auto cat = make_node(Node::Kind::Cat);
        cat->left = std::move(node);
        cat->right = std::move(piece);
        node = std::move(cat);
      }
    }
    return node;
  }

  NodePtr parse_repeat() {
    auto node = parse_atom();
    if (!at_end() && (peek() == '*' || peek() == '+' || peek() == '?')) {
      const char q = peek();
      ++pos_;
      auto rep = make_node(q == '*'   ? Node::Kind::Star
                           : q == '+' ? Node::Kind::Plus
                                      : Node::Kind::Quest);
      rep->left = std::move(node);
      node = std::move(rep);
      if (!at_end() && (peek() == '*' || peek() == '+' || peek() == '?')) {
        fail("quantifier follows quantifier, use a group");
      }
    }
    return node;
  }

  NodePtr parse_atom() {
    if (at_end()) fail("pattern ends where an atom is expected");
    const char c = peek();
    switch (c) {
      case '*':
      case '+':
      case '?':
        fail("quantifier has nothing to repeat");
      case '(': {
        ++pos_;
        auto inner = parse_alt();
        if (at_end() || peek() != ')') fail("unclosed group");
        ++pos_;
        return inner;
      }
      case '[':
        return parse_class();
      case '.':
        ++pos_;
        return make_node(Node::Kind::Any);
      case '^':
        ++pos_;
        return make_node(Node::Kind::Caret);
      case '$':
        ++pos_;
        return make_node(Node::Kind::Dollar);
      case '\\': {
        auto node = make_node(Node::Kind::Char);
        node->ch = parse_escape();
        return node;
      }
      default: {
        ++pos_;
        auto node = make_node(Node::Kind::Char);
        node->ch = static_cast<unsigned char>(c);
        return node;
      }
    }
  }

  unsigned char parse_escape() {
    ++pos_;
    if (at_end()) fail("dangling backslash");
    const char c = peek();
    ++pos_;
    switch (c) {
      case 'n':
        return '\n';
      case 't':
        return '\t';
      case 'r':
        return '\r';
      default:
        return static_cast<unsigned char>(c);
    }
  }

  NodePtr parse_class() {
    ++pos_;
    auto node = make_node(Node::Kind::Class);
    bool negated = false;
    if (!at_end() && peek() == '^') {
      negated = true;
      ++pos_;
    }
    bool have_item = false;
    while (true) {
      if (at_end()) fail("unclosed character class");
      if (peek() == ']') {
        ++pos_;
        break;
      }
      const unsigned char lo = parse_class_char();
      if (!at_end() && peek() == '-' && pos_ + 1 < text_.size() &&
          text_[pos_ + 1] != ']') {
        ++pos_;
        const unsigned char hi = parse_class_char();
        if (hi < lo) fail("character range is reversed");
        for (unsigned v = lo; v <= hi; ++v) node->cls.set(v);
      } else {
        node->cls.set(lo);
      }
      have_item = true;
    }
    if (!have_item) fail("empty character class");
    if (negated) node->cls.flip();
    return node;
  }

  unsigned char parse_class_char() {
    if (peek() == '\\') return parse_escape();
    const unsigned char c = static_cast<unsigned char>(peek());
    ++pos_;
    return c;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void append_escaped(std::string& out, unsigned char c) {
  if (c == '\n') {
    out += "\\n";
  } else if (c == '\t') {
    out += "\\t";
  } else if (c == '\r') {
    out += "\\r";
  } else if (kMetaChars.find(static_cast<char>(c)) != std::string_view::npos) {
    out.push_back('\\');
    out.push_back(static_cast<char>(c));
  } else {
    out.push_back(static_cast<char>(c));
  }
}

void append_class_escaped(std::string& out, unsigned char c) {
  if (c == '\n') {
    out += "\\n";
  } else if (c == '\t') {
    out += "\\t";
  } else if (c == '\r') {
    out += "\\r";
  } else if (c == ']' || c == '\\' || c == '^' || c == '-') {
    out.push_back('\\');
    out.push_back(static_cast<char>(c));
  } else {
    out.push_back(static_cast<char>(c));
  }
}

void render_class_body(std::string& out, const std::bitset<256>& cls) {
  unsigned v = 0;
  while (v < 256) {
    if (!cls.test(v)) {
      ++v;
      continue;
    }
    unsigned hi = v;
    while (hi + 1 < 256 && cls.test(hi + 1)) ++hi;
    append_class_escaped(out, static_cast<unsigned char>(v));
    if (hi == v + 1) {
      append_class_escaped(out, static_cast<unsigned char>(hi));
    } else if (hi > v) {
      out.push_back('-');
      append_class_escaped(out, static_cast<unsigned char>(hi));
    }
    v = hi + 1;
  }
}

// Precedence for rendering: alternation 0, concatenation 1, quantifier 2,
// atom 3. Empty gets -1 so it is always parenthesised to "()" where bare ""
// would change the parse.
int node_precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Empty:
      return -1;
    case Node::Kind::Alt:
      return 0;
    case Node::Kind::Cat:
      return 1;
    case Node::Kind::Star:
    case Node::Kind::Plus:
    case Node::Kind::Quest:
      return 2;
    default:
      return 3;
  }
}

void render(std::string& out, const Node& n, int min_prec) {
  const bool wrap = node_precedence(n) < min_prec;
  if (wrap) out.push_back('(');
  switch (n.kind) {
    case Node::Kind::Empty:
      break;
    case Node::Kind::Char:
      append_escaped(out, n.ch);
      break;
    case Node::Kind::Any:
      out.push_back('.');
      break;
    case Node::Kind::Caret:
      out.push_back('^');
      break;
    case Node::Kind::Dollar:
      out.push_back('$');
      break;
    case Node::Kind::Class: {
      const bool negate = n.cls.count() > 128 && !n.cls.all();
      out.push_back('[');
      if (negate) {
        out.push_back('^');
        render_class_body(out, ~n.cls);
      } else {
        render_class_body(out, n.cls);
      }
      out.push_back(']');
      break;
    }
    case Node::Kind::Cat:
      render(out, *n.left, 1);
      render(out, *n.right, 1);
      break;
    case Node::Kind::Alt:
      render(out, *n.left, 0);
      out.push_back('|');
      render(out, *n.right, 0);
      break;
    case Node::Kind::Star:
      render(out, *n.left, 3);
      out.push_back('*');
      break;
    case Node::Kind::Plus:
      render(out, *n.left, 3);
      out.push_back('+');
      break;
    case Node::Kind::Quest:
      render(out, *n.left, 3);
      out.push_back('?');
      break;
  }
  if (wrap) out.push_back(')');
}

}  // namespace

// Emits bytecode from the parse tree. Kept out of the anonymous namespace so
// it can be a friend of Pattern.
class PatternBuilder {
 public:
  static Pattern build(std::string_view text) {
    Parser parser(text);
    NodePtr root = parser.parse();

    Pattern p;
    p.text_ = std::string(text);
    render(p.canonical_, *root, 0);

    PatternBuilder builder(p);
    builder.emit(*root);
    builder.push(Pattern::Op::Match);
    if (p.program_.size() > kMaxProgram) {
      throw PatternSyntaxError(
          text.size(), "pattern compiles to " +
                           std::to_string(p.program_.size()) +
                           " instructions, limit is " +
                           std::to_string(kMaxProgram));
    }
    return p;
  }

 private:
  explicit PatternBuilder(Pattern& p) : p_(p) {}

  std::uint16_t here() const {
    return static_cast<std::uint16_t>(p_.program_.size());
  }

  std::uint16_t push(Pattern::Op op, unsigned char ch = 0, std::uint16_t x = 0,
                     std::uint16_t y = 0) {
    p_.program_.push_back(Pattern::Inst{op, ch, x, y});
    return static_cast<std::uint16_t>(p_.program_.size() - 1);
  }

  void emit(const Node& n) {
    switch (n.kind) {
      case Node::Kind::Empty:
        break;
      case Node::Kind::Char:
        push(Pattern::Op::Char, n.ch);
        break;
      case Node::Kind::Any:
        push(Pattern::Op::Any);
        break;
      case Node::Kind::Caret:
        push(Pattern::Op::Caret);
        break;
      case Node::Kind::Dollar:
        push(Pattern::Op::Dollar);
        break;
      case Node::Kind::Class: {
        const auto idx = static_cast<std::uint16_t>(p_.classes_.size());
        p_.classes_.push_back(n.cls);
        push(Pattern::Op::Class, 0, idx);
        break;
      }
      case Node::Kind::Cat:
        emit(*n.left);
        emit(*n.right);
        break;
      case Node::Kind::Alt: {
        const auto split = push(Pattern::Op::Split);
        p_.program_[split].x = here();
        emit(*n.left);
        const auto jmp = push(Pattern::Op::Jmp);
        p_.program_[split].y = here();
        emit(*n.right);
        p_.program_[jmp].x = here();
        break;
      }
      case Node::Kind::Star: {
        const auto split = push(Pattern::Op::Split);
        p_.program_[split].x = here();
        emit(*n.left);
        push(Pattern::Op::Jmp, 0, split);
        p_.program_[split].y = here();
        break;
      }
      case Node::Kind::Plus: {
        const auto body = here();
        emit(*n.left);
        const auto split = push(Pattern::Op::Split, 0, body);
        p_.program_[split].y = here();
        break;
      }
      case Node::Kind::Quest: {
        const auto split = push(Pattern::Op::Split);
        p_.program_[split].x = here();
        emit(*n.left);
        p_.program_[split].y = here();
        break;
      }
    }
  }

  Pattern& p_;
};

Pattern Pattern::compile(std::string_view text) {
  return PatternBuilder::build(text);
}

MatchResult Pattern::search_backtracking(std::string_view input) const {
  MatchResult result;
  struct Thread {
    std::uint16_t pc;
    std::uint32_t pos;
    std::uint64_t eps_seen;
  };
  std::vector<Thread> pending;
  const std::size_t len = input.size();

  for (std::size_t start = 0; start <= len; ++start) {
    pending.clear();
    pending.push_back({0, static_cast<std::uint32_t>(start), 0});
    while (!pending.empty()) {
      Thread th = pending.back();
      pending.pop_back();
      bool alive = true;
      while (alive) {
        ++result.steps;
        const Inst& in = program_[th.pc];
        const std::uint64_t bit = std::uint64_t{1} << th.pc;
        switch (in.op) {
          case Op::Char:
            if (th.pos < len &&
                static_cast<unsigned char>(input[th.pos]) == in.ch) {
              ++th.pos;
              th.eps_seen = 0;
              ++th.pc;
            } else {
              alive = false;
            }
            break;
          case Op::Any:
            if (th.pos < len) {
              ++th.pos;
              th.eps_seen = 0;
              ++th.pc;
            } else {
              alive = false;
            }
            break;
          case Op::Class:
            if (th.pos < len &&
                classes_[in.x].test(static_cast<unsigned char>(input[th.pos]))) {
              ++th.pos;
              th.eps_seen = 0;
              ++th.pc;
            } else {
              alive = false;
            }
            break;
          case Op::Match:
            result.matched = true;
            return result;
          case Op::Jmp:
            if (th.eps_seen & bit) {
              alive = false;
            } else {
              th.eps_seen |= bit;
              th.pc = in.x;
            }
            break;
          case Op::Split:
            if (th.eps_seen & bit) {
              alive = false;
            } else {
              th.eps_seen |= bit;
              pending.push_back({in.y, th.pos, th.eps_seen});
              th.pc = in.x;
            }
            break;
          case Op::Caret:
            if (th.pos == 0 && !(th.eps_seen & bit)) {
              th.eps_seen |= bit;
              ++th.pc;
            } else {
              alive = false;
            }
            break;
          case Op::Dollar:
            if (th.pos == len && !(th.eps_seen & bit)) {
              th.eps_seen |= bit;
              ++th.pc;
            } else {
              alive = false;
            }
            break;
        }
      }
    }
  }
  return result;
}

std::optional<MatchResult> Pattern::search_budgeted(std::string_view input,
                                                    std::int64_t budget) const {
  MatchResult result;
  const std::size_t prog_size = program_.size();
  const std::size_t len = input.size();
  std::vector<std::uint32_t> mark(prog_size, 0);
  std::uint32_t gen = 0;
  std::vector<std::uint16_t> current;
  std::vector<std::uint16_t> next;
  current.reserve(prog_size);
  next.reserve(prog_size);
  bool exhausted = false;

  // Follows epsilon instructions eagerly so the lists hold only consuming
  // instructions and Match. Every first visit of a pc at a position counts
  // as one step.
  auto add_thread = [&](auto&& self, std::vector<std::uint16_t>& list,
                        std::uint16_t pc, std::size_t pos) -> void {
    if (exhausted || mark[pc] == gen) return;
    mark[pc] = gen;
    if (++result.steps > budget) {
      exhausted = true;
      return;
    }
    const Inst& in = program_[pc];
    switch (in.op) {
      case Op::Jmp:
        self(self, list, in.x, pos);
        break;
      case Op::Split:
        self(self, list, in.x, pos);
        self(self, list, in.y, pos);
        break;
      case Op::Caret:
        if (pos == 0) self(self, list, static_cast<std::uint16_t>(pc + 1), pos);
        break;
      case Op::Dollar:
        if (pos == len)
          self(self, list, static_cast<std::uint16_t>(pc + 1), pos);
        break;
      default:
        list.push_back(pc);
        break;
    }
  };

  ++gen;
  add_thread(add_thread, current, 0, 0);
  for (std::size_t pos = 0;; ++pos) {
    for (const std::uint16_t pc : current) {
      if (program_[pc].op == Op::Match) {
        result.matched = true;
        break;
      }
    }
    if (result.matched || exhausted || pos == len) break;

    const auto c = static_cast<unsigned char>(input[pos]);
    ++gen;
    next.clear();
    for (const std::uint16_t pc : current) {
      const Inst& in = program_[pc];
      bool consumes = false;
      switch (in.op) {
        case Op::Char:
          consumes = (in.ch == c);
          break;
        case Op::Any:
          consumes = true;
          break;
        case Op::Class:
          consumes = classes_[in.x].test(c);
          break;
        default:
          break;
      }
      if (consumes) {
        add_thread(add_thread, next, static_cast<std::uint16_t>(pc + 1),
                   pos + 1);
      }
    }
    add_thread(add_thread, next, 0, pos + 1);
    current.swap(next);
  }

  if (exhausted) return std::nullopt;
  return result;
}

}  // namespace algsim
