#pragma once

// Partial deterministic automata (PFAs), words, state subsets, and careful
// application of words to subsets.
//
// States and letters are 1-based: states are 1..n, letters 1..m. A transition
// table entry of 0 (kUndefined) marks a missing transition.

#include <bit>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace csync {

using State = std::uint32_t;
using Letter = std::uint32_t;

inline constexpr State kUndefined = 0;

// Largest automaton whose subsets fit a StateSet.
inline constexpr std::size_t kStateSetCap = 64;

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " at line " + std::to_string(line)), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A finite word over letters 1..m.
using Word = std::vector<Letter>;

class Pfa {
 public:
  Pfa(std::size_t states, std::size_t letters)
      : n_(states), m_(letters), delta_(states * letters, kUndefined) {
    if (states == 0 || letters == 0)
      throw std::invalid_argument("automaton needs at least one state and one letter");
  }

  std::size_t states() const noexcept { return n_; }
  std::size_t letters() const noexcept { return m_; }

  // Successor of state q under letter a, or kUndefined.
  State next(State q, Letter a) const noexcept { return delta_[(q - 1) * m_ + (a - 1)]; }

  bool defined(State q, Letter a) const noexcept { return next(q, a) != kUndefined; }

  void set(State q, Letter a, State target) {
    if (q < 1 || q > n_ || a < 1 || a > m_)
      throw std::out_of_range("transition (" + std::to_string(q) + ", " + std::to_string(a) +
                              ") outside the automaton");
    if (target > n_)
      throw std::out_of_range("state index " + std::to_string(target) + " out of range");
    delta_[(q - 1) * m_ + (a - 1)] = target;
  }

  // Letters defined at every state, in increasing order.
  std::vector<Letter> total_letters() const {
    std::vector<Letter> out;
    for (Letter a = 1; a <= m_; ++a) {
      bool total = true;
      for (State q = 1; q <= n_ && total; ++q) total = defined(q, a);
      if (total) out.push_back(a);
    }
    return out;
  }

  std::size_t undefined_count() const noexcept {
    std::size_t c = 0;
    for (State s : delta_) c += (s == kUndefined);
    return c;
  }

  friend bool operator==(const Pfa&, const Pfa&) = default;

 private:
  std::size_t n_;
  std::size_t m_;
  std::vector<State> delta_;  // row-major by state
};

// Subset of the states of an automaton with at most kStateSetCap states.
class StateSet {
 public:
  constexpr StateSet() = default;
  constexpr explicit StateSet(std::uint64_t bits) : bits_(bits) {}

  static constexpr StateSet full(std::size_t n) {
    return StateSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }
  static constexpr StateSet single(State q) { return StateSet(std::uint64_t{1} << (q - 1)); }

  constexpr bool contains(State q) const { return (bits_ >> (q - 1)) & 1u; }
  constexpr void insert(State q) { bits_ |= std::uint64_t{1} << (q - 1); }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_subset_of(StateSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr std::uint64_t bits() const { return bits_; }

  // Smallest member; the set must be nonempty.
  constexpr State first() const { return static_cast<State>(std::countr_zero(bits_)) + 1; }

  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) f(static_cast<State>(std::countr_zero(b)) + 1);
  }

  std::vector<State> members() const {
    std::vector<State> out;
    for_each([&](State q) { out.push_back(q); });
    return out;
  }

  friend constexpr bool operator==(StateSet, StateSet) = default;

 private:
  std::uint64_t bits_ = 0;
};

inline void require_fits_state_set(const Pfa& pfa) {
  if (pfa.states() > kStateSetCap)
    throw std::invalid_argument("automaton has " + std::to_string(pfa.states()) +
                                " states; subsets support at most " + std::to_string(kStateSetCap));
}

// {δ(q,a) : q ∈ s}, or nullopt if a is undefined at some member of s.
inline std::optional<StateSet> apply_letter(const Pfa& pfa, StateSet s, Letter a) {
  StateSet out;
  for (std::uint64_t b = s.bits(); b != 0; b &= b - 1) {
    const State t = pfa.next(static_cast<State>(std::countr_zero(b)) + 1, a);
    if (t == kUndefined) return std::nullopt;
    out.insert(t);
  }
  return out;
}

inline std::optional<StateSet> image(const Pfa& pfa, StateSet s, const Word& w) {
  for (Letter a : w) {
    auto next = apply_letter(pfa, s, a);
    if (!next) return std::nullopt;
    s = *next;
  }
  return s;
}

// Careful image of the whole state set, computed on an explicit membership
// vector so that it works for any number of states.
inline std::optional<std::vector<State>> image_of_all(const Pfa& pfa, const Word& w) {
  const std::size_t n = pfa.states();
  std::vector<char> active(n + 1, 1), next(n + 1);
  active[0] = 0;
  for (Letter a : w) {
    if (a < 1 || a > pfa.letters()) return std::nullopt;
    std::fill(next.begin(), next.end(), 0);
    for (State q = 1; q <= n; ++q) {
      if (!active[q]) continue;
      const State t = pfa.next(q, a);
      if (t == kUndefined) return std::nullopt;
      next[t] = 1;
    }
    active.swap(next);
  }
  std::vector<State> out;
  for (State q = 1; q <= n; ++q)
    if (active[q]) out.push_back(q);
  return out;
}

// True iff the first letter is defined everywhere, each later letter is
// defined on the current image, and the final image is a single state.
inline bool is_carefully_synchronizing(const Pfa& pfa, const Word& w) {
  auto img = image_of_all(pfa, w);
  return img && img->size() == 1;
}

// ---------------------------------------------------------------------------
// Text format: header "n m", then n rows (one per state q) of m entries, entry
// a being δ(q, a) or 0 when undefined. Lines starting with '#' are comments.

inline Pfa parse_pfa(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      const auto pos = out.find_first_not_of(" \t\r");
      if (pos == std::string::npos || out[pos] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line(line)) throw ParseError("missing header", lineno + 1);
  long long n = 0, m = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> m) || (hs >> extra) || n < 1 || m < 1)
      throw ParseError("malformed header '" + line + "'", lineno);
  }
  Pfa pfa(static_cast<std::size_t>(n), static_cast<std::size_t>(m));
  for (State q = 1; q <= static_cast<State>(n); ++q) {
    if (!next_content_line(line))
      throw ParseError("expected " + std::to_string(n) + " state rows, found " + std::to_string(q - 1),
                       lineno + 1);
    std::istringstream rs(line);
    for (Letter a = 1; a <= static_cast<Letter>(m); ++a) {
      long long v;
      if (!(rs >> v)) throw ParseError("expected " + std::to_string(m) + " entries in row", lineno);
      if (v < 0 || v > n) throw ParseError("state index " + std::to_string(v) + " out of range", lineno);
      pfa.set(q, a, static_cast<State>(v));
    }
    std::string extra;
    if (rs >> extra) throw ParseError("expected " + std::to_string(m) + " entries in row", lineno);
  }
  if (next_content_line(line))
    throw ParseError("unexpected extra row; expected " + std::to_string(n) + " state rows", lineno);
  return pfa;
}

inline Pfa parse_pfa(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_pfa(in);
}

inline void write_pfa(std::ostream& out, const Pfa& pfa, std::string_view comment = {}) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << pfa.states() << ' ' << pfa.letters() << '\n';
  for (State q = 1; q <= pfa.states(); ++q) {
    for (Letter a = 1; a <= pfa.letters(); ++a) out << (a > 1 ? " " : "") << pfa.next(q, a);
    out << '\n';
  }
}

inline std::string serialize_pfa(const Pfa& pfa) {
  std::ostringstream out;
  write_pfa(out, pfa);
  return out.str();
}

// Letters 1..26 render as 'a'..'z'; larger alphabets fall back to numbers.
inline std::string format_word(const Word& w, std::size_t alphabet) {
  std::string s;
  if (alphabet <= 26) {
    for (Letter a : w) s.push_back(static_cast<char>('a' + a - 1));
    return s;
  }
  for (std::size_t i = 0; i < w.size(); ++i) s += (i ? " " : "") + std::to_string(w[i]);
  return s;
}

inline Word parse_word(std::string_view text) {
  Word w;
  for (char c : text) {
    if (c < 'a' || c > 'z') throw std::invalid_argument("word letters must be in a..z");
    w.push_back(static_cast<Letter>(c - 'a' + 1));
  }
  return w;
}

}  // namespace csync
