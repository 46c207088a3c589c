#ifndef MHFA_TESTS_HELPERS_HPP
#define MHFA_TESTS_HELPERS_HPP

#include "automata.hpp"

#include <fstream>
#include <sstream>
#include <string>

namespace mhfa::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(MHFA_FIXTURES_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline MultiHeadNFA load_fixture(const std::string& name) {
  return parse_machine(read_file(fixture_path(name)));
}

inline MultiHeadNFA anbn() { return load_fixture("anbn.mhfa"); }
inline MultiHeadNFA anbn_lockstep() { return load_fixture("anbn_lockstep.mhfa"); }
inline MultiHeadNFA m1_view() { return load_fixture("m1.mhfa"); }
inline MultiHeadNFA m2_view() { return load_fixture("m2.mhfa"); }
inline MultiHeadNFA spin() { return load_fixture("spin.mhfa"); }

inline Word word(const MultiHeadNFA& m, const std::string& text) {
  return parse_input(m, text);
}

/// All words over the machine's input alphabet with length <= max_len,
/// shortest first, then lexicographic in declared symbol order.
inline std::vector<Word> words_up_to(const MultiHeadNFA& m, int max_len) {
  std::vector<Word> out;
  const int sigma = m.alphabet.sigma_size();
  for (int len = 0; len <= max_len; ++len) {
    Word w(static_cast<std::size_t>(len), TapeAlphabet::first_input);
    if (len == 0) {
      out.push_back(w);
      continue;
    }
    if (sigma == 0) break;
    while (true) {
      out.push_back(w);
      int i = len - 1;
      while (i >= 0 && w[static_cast<std::size_t>(i)] == TapeAlphabet::first_input + sigma - 1) {
        w[static_cast<std::size_t>(i)] = TapeAlphabet::first_input;
        --i;
      }
      if (i < 0) break;
      ++w[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

/// 0^i 1^i membership for words over the anbn fixture's alphabet.
inline bool is_anbn_member(const Word& w) {
  const Symbol zero = TapeAlphabet::first_input;
  const Symbol one = TapeAlphabet::first_input + 1;
  std::size_t i = 0;
  while (i < w.size() && w[i] == zero) ++i;
  if (i * 2 != w.size()) return false;
  for (std::size_t j = i; j < w.size(); ++j) {
    if (w[j] != one) return false;
  }
  return true;
}

}  // namespace mhfa::testing

#endif
