#include "subrqa/substitution.hpp"

#include <cctype>
#include <vector>

#include "subrqa/errors.hpp"

namespace subrqa {

Substitution::Substitution(Word image0, Word image1) : image0_(std::move(image0)), image1_(std::move(image1)) {
  if (image0_.size() != image1_.size()) {
    throw DomainError("substitution images must have equal length (got " + std::to_string(image0_.size()) +
                      " and " + std::to_string(image1_.size()) + ")");
  }
  if (image0_.size() < 2) throw DomainError("substitution length q must be at least 2");
}

Substitution Substitution::parse(std::string_view spec) {
  // Strip whitespace, remembering original positions for error messages.
  std::string text;
  std::vector<std::size_t> origin;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (!std::isspace(static_cast<unsigned char>(spec[i]))) {
      text.push_back(spec[i]);
      origin.push_back(i);
    }
  }
  auto pos_of = [&](std::size_t k) { return k < origin.size() ? origin[k] : spec.size(); };

  std::optional<Word> images[2];
  std::size_t k = 0;
  for (int clause = 0; clause < 2; ++clause) {
    if (clause == 1) {
      if (k >= text.size() || text[k] != ',') throw ParseError("expected ','", pos_of(k));
      ++k;
    }
    if (k >= text.size() || (text[k] != '0' && text[k] != '1')) {
      throw ParseError("expected letter '0' or '1'", pos_of(k));
    }
    const int letter = text[k] - '0';
    ++k;
    if (text.compare(k, 2, "->") != 0) throw ParseError("expected '->'", pos_of(k));
    k += 2;
    const std::size_t start = k;
    while (k < text.size() && text[k] != ',') {
      if (text[k] != '0' && text[k] != '1') throw ParseError("image letters must be '0' or '1'", pos_of(k));
      ++k;
    }
    if (images[letter]) throw ParseError("duplicate image for letter " + std::to_string(letter), pos_of(start - 3));
    if (k == start) throw ParseError("empty image", pos_of(start));
    images[letter] = Word::from_string(std::string_view(text).substr(start, k - start));
  }
  if (k != text.size()) throw ParseError("trailing characters", pos_of(k));
  if (images[0]->size() != images[1]->size()) {
    throw ParseError("images must have equal length", 0);
  }
  if (images[0]->size() < 2) throw ParseError("substitution length must be at least 2", 0);
  return Substitution(std::move(*images[0]), std::move(*images[1]));
}

Substitution Substitution::squared() const { return Substitution(apply(*this, image0_), apply(*this, image1_)); }

Substitution Substitution::letter_swapped() const {
  auto swap_letters = [](const Word& w) {
    Word out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out.set(i, 1 - w.bit(i));
    return out;
  };
  return Substitution(swap_letters(image1_), swap_letters(image0_));
}

std::string Substitution::to_string() const {
  return "0->" + image0_.to_string() + ",1->" + image1_.to_string();
}

Word apply(const Substitution& s, const Word& w) {
  Word out;
  out.reserve(w.size() * s.q());
  for (std::size_t i = 0; i < w.size(); ++i) out.append(s.image(w[i]));
  return out;
}

Word iterate(const Substitution& s, Letter a, unsigned k, std::size_t cap) {
  Word w;
  w.push_back(a);
  for (unsigned step = 0; step < k; ++step) {
    if (w.size() > cap / s.q()) {
      throw ResourceError("iterate: q^k exceeds the size cap of " + std::to_string(cap) + " letters");
    }
    w = apply(s, w);
  }
  return w;
}

NormalizedSubstitution normalize(const Substitution& s) {
  if (s.image0()[0] == Letter::Zero) return {s, Normalization::Identity};
  if (s.image1()[0] == Letter::One) return {s.letter_swapped(), Normalization::LetterSwap};
  // ζ(0) starts with 1 and ζ(1) starts with 0, so ζ²(0) starts with 0.
  return {s.squared(), Normalization::Square};
}

BitSequence fixed_point_prefix(const Substitution& s, std::size_t n, std::size_t cap) {
  if (s.image0()[0] != Letter::Zero) {
    throw DomainError("fixed_point_prefix: image of 0 must start with 0 (got " + s.to_string() + ")");
  }
  if (n > cap) throw ResourceError("fixed_point_prefix: n exceeds the size cap of " + std::to_string(cap));
  const std::size_t q = s.q();
  BitSequence x((n + q - 1) / q * q);
  // x_{qt+p} = ζ(x_t)_p; x_t is known before block t is written since t < qt for t >= 1.
  for (std::size_t t = 0; t * q < x.size(); ++t) {
    const Word& img = s.image(t == 0 ? Letter::Zero : x[t]);
    for (std::size_t p = 0; p < q; ++p) x.set(t * q + p, img.bit(p));
  }
  x.truncate(n);
  return x;
}

BitSequence generating_prefix(const Substitution& s, std::size_t n, std::size_t cap) {
  if (s.image0()[0] == Letter::Zero) return fixed_point_prefix(s, n, cap);
  if (s.image1()[0] == Letter::One) {
    BitSequence y = fixed_point_prefix(s.letter_swapped(), n, cap);
    BitSequence out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out.set(i, 1 - y.bit(i));
    return out;
  }
  return fixed_point_prefix(s.squared(), n, cap);
}

bool is_primitive(const Substitution& s) {
  for (const Letter a : {Letter::Zero, Letter::One}) {
    const Word w = iterate(s, a, 2);
    if (!w.contains(Letter::Zero) || !w.contains(Letter::One)) return false;
  }
  return true;
}

namespace {

bool is_constant(const Word& w, Letter a) { return !w.contains(flip(a)); }

bool is_alternating_odd_pair(const Substitution& s) {
  // q = 2r+1, ζ(0) = (01)^r 0 and ζ(1) = (10)^r 1.
  const std::size_t q = s.q();
  if (q % 2 == 0) return false;
  for (std::size_t i = 0; i < q; ++i) {
    if (s.image0().bit(i) != static_cast<int>(i % 2)) return false;
    if (s.image1().bit(i) != static_cast<int>(1 - i % 2)) return false;
  }
  return true;
}

}  // namespace

Classification classify(const Substitution& s) {
  if (!is_primitive(s)) {
    const bool img0_const = is_constant(s.image0(), Letter::Zero) || is_constant(s.image0(), Letter::One);
    const bool img1_const = is_constant(s.image1(), Letter::Zero) || is_constant(s.image1(), Letter::One);
    if (img0_const && img1_const) return {SubstitutionKind::NonPrimitiveTrivial, Normalization::Identity, std::nullopt};
    const Letter absorbing = is_constant(s.image1(), Letter::One) ? Letter::One : Letter::Zero;
    return {SubstitutionKind::NonPrimitiveProximal, Normalization::Identity, absorbing};
  }
  const auto [t, tag] = normalize(s);
  const bool aperiodic = t.image0().contains(Letter::One) && t.image1() != t.image0() &&
                         t.image1().contains(Letter::Zero) && !is_alternating_odd_pair(t);
  return {aperiodic ? SubstitutionKind::PrimitiveAperiodic : SubstitutionKind::PrimitivePeriodic, tag, std::nullopt};
}

std::string to_string(SubstitutionKind kind) {
  switch (kind) {
    case SubstitutionKind::PrimitiveAperiodic: return "PrimitiveAperiodic";
    case SubstitutionKind::PrimitivePeriodic: return "PrimitivePeriodic";
    case SubstitutionKind::NonPrimitiveProximal: return "NonPrimitiveProximal";
    case SubstitutionKind::NonPrimitiveTrivial: return "NonPrimitiveTrivial";
  }
  return "?";
}

std::string to_string(Normalization tag) {
  switch (tag) {
    case Normalization::Identity: return "Identity";
    case Normalization::LetterSwap: return "LetterSwap";
    case Normalization::Square: return "Square";
  }
  return "?";
}

}  // namespace subrqa
