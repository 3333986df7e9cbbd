#include "subrqa/recognizability.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "subrqa/errors.hpp"

namespace subrqa {

AlphaBeta alpha_beta(const Substitution& s) {
  if (s.image0() == s.image1()) throw DomainError("alpha_beta: images of 0 and 1 coincide");
  const std::size_t q = s.q();
  AlphaBeta ab;
  while (s.image0().bit(ab.alpha) == s.image1().bit(ab.alpha)) ++ab.alpha;
  while (s.image0().bit(q - 1 - ab.beta) == s.image1().bit(q - 1 - ab.beta)) ++ab.beta;
  ab.c = Rational(static_cast<long>(ab.alpha + ab.beta), static_cast<long>(q - 1));
  ab.c.canonicalize();
  return ab;
}

std::size_t compute_R0(std::size_t q, std::size_t alpha_plus_beta, std::size_t R) {
  std::size_t r0 = 1;
  while (r0 * q + alpha_plus_beta < R) ++r0;
  return r0;
}

// ---------------------------------------------------------------------------
// Prefix scans

namespace {

using ResidueMap = std::map<Word, std::vector<bool>>;

ResidueMap scan_words(const BitSequence& x, std::size_t len, std::size_t q) {
  ResidueMap out;
  if (x.size() < len) return out;
  const std::size_t last = x.size() - len;
  if (len <= 64) {
    std::unordered_map<std::uint64_t, std::vector<bool>> packed;
    for (std::size_t i = 0; i <= last; ++i) {
      auto [it, fresh] = packed.try_emplace(x.window(i, static_cast<unsigned>(len)));
      if (fresh) it->second.assign(q, false);
      it->second[i % q] = true;
    }
    for (auto& [key, residues] : packed) {
      Word w(len);
      for (std::size_t b = 0; b < len; ++b) w.set(b, static_cast<int>((key >> b) & 1U));
      out.emplace(std::move(w), std::move(residues));
    }
  } else {
    for (std::size_t i = 0; i <= last; ++i) {
      auto [it, fresh] = out.try_emplace(x.slice(i, len));
      if (fresh) it->second.assign(q, false);
      it->second[i % q] = true;
    }
  }
  return out;
}

struct SaturatedScan {
  ResidueMap words;
  std::size_t prefix_length = 0;
};

SaturatedScan saturated_scan(const Substitution& s, std::size_t len, std::size_t cap) {
  if (len == 0) throw DomainError("word length must be positive");
  std::size_t n = std::max<std::size_t>(1024, 64 * len * s.q());
  if (2 * n > cap) throw ResourceError("saturation: starting prefix exceeds the cap");
  BitSequence x = fixed_point_prefix(s, 2 * n, cap);
  ResidueMap previous = scan_words(x.slice(0, n), len, s.q());
  while (true) {
    ResidueMap current = scan_words(x, len, s.q());
    if (current == previous) return {std::move(current), x.size()};
    if (2 * x.size() > cap) {
      throw ResourceError("saturation: word set of length " + std::to_string(len) +
                          " did not stabilise below " + std::to_string(cap) + " letters");
    }
    previous = std::move(current);
    x = fixed_point_prefix(s, 2 * x.size(), cap);
  }
}

std::optional<std::size_t> unique_index(const std::vector<bool>& residues) {
  std::optional<std::size_t> found;
  for (std::size_t p = 0; p < residues.size(); ++p) {
    if (!residues[p]) continue;
    if (found) return std::nullopt;
    found = p;
  }
  return found;
}

void require_primitive_aperiodic_normalized(const Substitution& s, const char* who) {
  const Classification cls = classify(s);
  if (cls.kind != SubstitutionKind::PrimitiveAperiodic) {
    throw DomainError(std::string(who) + ": substitution must be primitive aperiodic (got " +
                      to_string(cls.kind) + ")");
  }
  if (s.image0()[0] != Letter::Zero) {
    throw DomainError(std::string(who) + ": substitution must be normalized (image of 0 starting with 0)");
  }
}

}  // namespace

LanguageSlice language_slice(const Substitution& s, std::size_t ell, std::size_t cap) {
  SaturatedScan scan = saturated_scan(s, ell, cap);
  LanguageSlice slice;
  slice.length = ell;
  slice.saturated = true;
  slice.prefix_length = scan.prefix_length;
  for (auto& [w, residues] : scan.words) slice.words.insert(w);
  return slice;
}

std::optional<std::size_t> is_recognizable_word(const Substitution& s, const Word& w, std::size_t cap) {
  SaturatedScan scan = saturated_scan(s, w.size(), cap);
  const auto it = scan.words.find(w);
  if (it == scan.words.end()) {
    throw DomainError("word " + w.to_string() + " does not occur in the fixed point");
  }
  return unique_index(it->second);
}

// ---------------------------------------------------------------------------
// Exact word statistics

std::optional<std::size_t> WordStatistics::Entry::unique_residue() const { return unique_index(residues); }

WordStatistics::WordStatistics(Substitution s) : s_(std::move(s)) {
  if (!is_primitive(s_)) throw DomainError("WordStatistics: substitution must be primitive");
}

const std::map<Word, WordStatistics::Entry>& WordStatistics::words(std::size_t k) {
  if (k == 0) throw DomainError("WordStatistics: word length must be positive");
  auto it = by_length_.find(k);
  if (it == by_length_.end()) {
    build(k);
    it = by_length_.find(k);
  }
  return it->second;
}

Rational WordStatistics::frequency(const Word& w) {
  const auto& table = words(w.size());
  const auto it = table.find(w);
  return it == table.end() ? Rational(0) : it->second.frequency;
}

namespace {

// Solves A f = b over the rationals (A invertible) by Gauss–Jordan.
template <std::size_t N>
std::array<Rational, N> solve(std::array<std::array<Rational, N>, N> a, std::array<Rational, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    while (pivot < N && a[pivot][col] == 0) ++pivot;
    if (pivot == N) throw DomainError("singular linear system");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = 0; r < N; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (std::size_t k = col; k < N; ++k) a[r][k] -= factor * a[col][k];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t r = 0; r < N; ++r) b[r] /= a[r][r];
  return b;
}

}  // namespace

void WordStatistics::build(std::size_t k) {
  const std::size_t q = s_.q();
  const Rational qr(static_cast<long>(q));
  std::map<Word, Entry> table;
  auto add = [&](const Word& w, const Rational& weight, std::size_t p) {
    auto [it, fresh] = table.try_emplace(w);
    if (fresh) it->second.residues.assign(q, false);
    it->second.frequency += weight;
    it->second.residues[p] = true;
  };

  if (k == 1) {
    // Perron eigenvector of the incidence matrix.
    const auto zeros = [](const Word& w) {
      std::size_t z = 0;
      for (std::size_t i = 0; i < w.size(); ++i) z += w.bit(i) == 0;
      return z;
    };
    const long a = static_cast<long>(zeros(s_.image0()));
    const long b = static_cast<long>(zeros(s_.image1()));
    Rational f0(b, static_cast<long>(q) - a + b);
    f0.canonicalize();
    const Rational freq[2] = {f0, 1 - f0};
    for (int letter = 0; letter < 2; ++letter) {
      for (std::size_t p = 0; p < q; ++p) {
        add(Word::from_string(std::to_string(s_.image(letter_of(letter)).bit(p))), freq[letter] / qr, p);
      }
    }
  } else if (k == 2) {
    // Occurrences at p <= q−2 lie inside one image; those at p = q−1
    // straddle two images, giving (I − M/q) f = b.
    std::array<std::array<Rational, 4>, 4> m{};
    std::array<Rational, 4> rhs{};
    const auto& letters = words(1);
    for (const auto& [v, e] : letters) {
      const Word& img = s_.image(v[0]);
      for (std::size_t p = 0; p + 2 <= q; ++p) rhs[img.window(p, 2)] += e.frequency / qr;
    }
    for (std::size_t w = 0; w < 4; ++w) m[w][w] = 1;
    for (std::size_t v = 0; v < 4; ++v) {
      const int lo = static_cast<int>(v & 1U), hi = static_cast<int>(v >> 1);
      const std::size_t w = static_cast<std::size_t>(s_.image(letter_of(lo)).bit(q - 1)) |
                            (static_cast<std::size_t>(s_.image(letter_of(hi)).bit(0)) << 1);
      m[w][v] -= Rational(1) / qr;
    }
    const auto f = solve<4>(m, rhs);
    std::array<Rational, 4> freq = f;
    for (std::size_t v = 0; v < 4; ++v) {
      if (freq[v] == 0) continue;
      Word vw(2);
      vw.set(0, static_cast<int>(v & 1U));
      vw.set(1, static_cast<int>(v >> 1));
      const Word img = apply(s_, vw);
      for (std::size_t p = 0; p < q; ++p) {
        // Only the residue is recorded here; frequencies come from the solve.
        add(img.slice(p, 2), Rational(0), p);
      }
    }
    for (auto& [w, e] : table) e.frequency = freq[w.window(0, 2)];
    std::erase_if(table, [](const auto& kv) { return kv.second.frequency == 0; });
  } else {
    const std::size_t k2 = (k - 1 + q - 1) / q + 1;
    const auto parents = words(k2);
    for (const auto& [v, e] : parents) {
      const Word img = apply(s_, v);
      for (std::size_t p = 0; p < q; ++p) add(img.slice(p, k), e.frequency / qr, p);
    }
  }
  by_length_.emplace(k, std::move(table));
}

// ---------------------------------------------------------------------------
// Constants

namespace {

void validate_sandwich(const RecogConstants& rc) {
  if (!(rc.K + 1 <= rc.R && rc.R <= rc.K + rc.q)) {
    throw DiscrepancyError("recognizability: K+1 <= R <= K+q violated (K=" + std::to_string(rc.K) +
                           ", R=" + std::to_string(rc.R) + ", q=" + std::to_string(rc.q) + ")");
  }
}

template <class ResidueLookup>
RecogConstants constants_from(const Substitution& s, ResidueLookup&& residues_of_length) {
  const AlphaBeta ab = alpha_beta(s);
  RecogConstants rc;
  rc.q = s.q();
  rc.alpha = ab.alpha;
  rc.beta = ab.beta;
  rc.c = ab.c;

  constexpr std::size_t kMaxLength = 4096;
  auto all_recognizable = [&](std::size_t len) {
    for (const auto& residues : residues_of_length(len)) {
      if (!unique_index(residues)) return false;
    }
    return true;
  };
  auto cuts_recognizable = [&](std::size_t len) {
    for (const auto& residues : residues_of_length(len)) {
      if (residues[0] && !unique_index(residues)) return false;
    }
    return true;
  };

  rc.R = ab.alpha + ab.beta + 1;
  while (!all_recognizable(rc.R)) {
    if (++rc.R > kMaxLength) throw ResourceError("recognizability: no R found below " + std::to_string(kMaxLength));
  }
  rc.K = 1;
  while (!cuts_recognizable(rc.K + 1)) ++rc.K;
  rc.R0 = compute_R0(rc.q, rc.alpha_plus_beta(), rc.R);
  validate_sandwich(rc);
  return rc;
}

}  // namespace

RecogConstants recognizability_constants(const Substitution& s) {
  require_primitive_aperiodic_normalized(s, "recognizability_constants");
  WordStatistics stats(s);
  return constants_from(s, [&](std::size_t len) {
    std::vector<std::vector<bool>> out;
    for (const auto& [w, e] : stats.words(len)) out.push_back(e.residues);
    return out;
  });
}

RecogConstants recognizability_constants_scanned(const Substitution& s, std::size_t cap) {
  require_primitive_aperiodic_normalized(s, "recognizability_constants_scanned");
  return constants_from(s, [&](std::size_t len) {
    std::vector<std::vector<bool>> out;
    for (auto& [w, residues] : saturated_scan(s, len, cap).words) out.push_back(std::move(residues));
    return out;
  });
}

}  // namespace subrqa
