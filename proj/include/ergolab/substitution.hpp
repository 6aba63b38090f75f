#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "ergolab/errors.hpp"

namespace ergolab {

/// A primitive substitution on letters 0..k-1, written with digit symbols.
/// The fixed point is one-sided, seeded by a letter whose image starts with
/// itself.
struct SubstitutionRule {
  std::string name;
  std::vector<std::string> images;  // image word of each letter, chars '0'..'9'
  int seed = 0;

  std::size_t alphabet_size() const { return images.size(); }

  void validate() const {
    if (images.empty()) throw ConfigError("substitution: empty rule");
    for (const auto& w : images) {
      if (w.empty()) throw ConfigError("substitution: empty image word");
      for (char ch : w) {
        if (ch < '0' || ch >= static_cast<char>('0' + images.size()))
          throw ConfigError("substitution: image letter out of alphabet");
      }
    }
    if (seed < 0 || static_cast<std::size_t>(seed) >= images.size() ||
        images[seed][0] != static_cast<char>('0' + seed))
      throw ConfigError("substitution: seed image must start with the seed letter");
  }

  /// incidence()[a][b] = number of occurrences of letter b in the image of a.
  std::vector<std::vector<std::uint64_t>> incidence() const {
    std::vector<std::vector<std::uint64_t>> m(alphabet_size(),
                                              std::vector<std::uint64_t>(alphabet_size(), 0));
    for (std::size_t a = 0; a < alphabet_size(); ++a)
      for (char ch : images[a]) m[a][static_cast<std::size_t>(ch - '0')]++;
    return m;
  }

  /// Letter frequencies of the fixed point: the normalized Perron vector of
  /// the transposed incidence matrix, by power iteration.
  std::vector<double> letter_frequencies() const {
    auto m = incidence();
    std::size_t k = alphabet_size();
    std::vector<double> v(k, 1.0 / static_cast<double>(k)), w(k);
    for (int it = 0; it < 256; ++it) {
      double norm = 0;
      for (std::size_t b = 0; b < k; ++b) {
        w[b] = 0;
        for (std::size_t a = 0; a < k; ++a) w[b] += static_cast<double>(m[a][b]) * v[a];
        norm += w[b];
      }
      for (std::size_t b = 0; b < k; ++b) v[b] = w[b] / norm;
    }
    return v;
  }

  static SubstitutionRule lookup(const std::string& name) {
    if (name == "thue_morse") return SubstitutionRule{"thue_morse", {"01", "10"}, 0};
    if (name == "fibonacci") return SubstitutionRule{"fibonacci", {"01", "0"}, 0};
    throw ConfigError("unknown substitution rule: " + name);
  }
};

/// The expanded prefix of a substitution fixed point, grown on demand by
/// re-substituting the current prefix. Expansion is the only mutation and is
/// serialized internally; reads of already-expanded letters are stable.
class SubstitutionOrbit {
 public:
  explicit SubstitutionOrbit(SubstitutionRule rule, std::uint64_t horizon_cap = (1ull << 24))
      : rule_(std::move(rule)), cap_(horizon_cap) {
    rule_.validate();
    prefix_.push_back(static_cast<std::uint8_t>(rule_.seed));
  }

  const SubstitutionRule& rule() const { return rule_; }
  std::uint64_t horizon_cap() const { return cap_; }

  void ensure(std::uint64_t len) const {
    std::lock_guard<std::mutex> lock(mu_);
    if (len > cap_)
      throw HorizonExhausted("substitution horizon exhausted: need " + std::to_string(len) +
                             " letters, cap " + std::to_string(cap_));
    while (prefix_.size() < len) {
      std::vector<std::uint8_t> next;
      next.reserve(prefix_.size() * 2);
      for (std::uint8_t a : prefix_) {
        const std::string& img = rule_.images[a];
        for (char ch : img) next.push_back(static_cast<std::uint8_t>(ch - '0'));
        if (next.size() >= cap_) break;
      }
      if (next.size() <= prefix_.size())
        throw ConfigError("substitution rule does not expand");
      prefix_ = std::move(next);
    }
  }

  int letter(std::uint64_t i) const {
    if (i >= expanded()) ensure(i + 1);
    std::lock_guard<std::mutex> lock(mu_);
    return prefix_[i];
  }

  std::uint64_t expanded() const {
    std::lock_guard<std::mutex> lock(mu_);
    return prefix_.size();
  }

  std::string word(std::uint64_t pos, std::size_t len) const {
    ensure(pos + len);
    std::lock_guard<std::mutex> lock(mu_);
    std::string out(len, '0');
    for (std::size_t i = 0; i < len; ++i)
      out[i] = static_cast<char>('0' + prefix_[pos + i]);
    return out;
  }

 private:
  SubstitutionRule rule_;
  std::uint64_t cap_;
  mutable std::vector<std::uint8_t> prefix_;
  mutable std::mutex mu_;
};

/// A point of the subshift: an index into the shared fixed point.
struct SymbolicPoint {
  std::shared_ptr<SubstitutionOrbit> orbit;
  std::uint64_t offset = 0;

  friend bool operator==(const SymbolicPoint& a, const SymbolicPoint& b) {
    return a.orbit.get() == b.orbit.get() && a.offset == b.offset;
  }
};

}  // namespace ergolab
