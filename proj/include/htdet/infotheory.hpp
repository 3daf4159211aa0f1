// Plug-in entropy, joint/conditional entropy and mutual information over
// binary symbol sequences. All values are in nats.

#ifndef HTDET_INFOTHEORY_HPP
#define HTDET_INFOTHEORY_HPP

#include <cstddef>
#include <string>

#include "htdet/bitvector.hpp"

namespace htdet {

/// One point of the clustering space: a wire's encoded-waveform entropy.
struct EntropyRecord {
  std::string wire;
  double entropy = 0.0;       // nats, 0 <= entropy <= ln 2
  double p_transition = 0.0;  // fraction of 1 symbols in the encoding

  friend bool operator==(const EntropyRecord&, const EntropyRecord&) = default;
};

/// Cell counts of the empirical joint distribution of two equal-length
/// binary sequences; n_xy counts positions with x = X and y = Y.
struct JointCounts {
  std::size_t n00 = 0;
  std::size_t n01 = 0;
  std::size_t n10 = 0;
  std::size_t n11 = 0;

  [[nodiscard]] std::size_t total() const noexcept { return n00 + n01 + n10 + n11; }
  [[nodiscard]] std::size_t x_ones() const noexcept { return n10 + n11; }
  [[nodiscard]] std::size_t y_ones() const noexcept { return n01 + n11; }
};

/// Throws Error(LengthMismatch) or Error(EmptySequence).
JointCounts joint_counts(const BitVector& x, const BitVector& y);

/// -p ln p - (1-p) ln(1-p), with 0 ln 0 = 0.
double binary_entropy(double p) noexcept;
double entropy_from_counts(std::size_t ones, std::size_t n) noexcept;

double entropy(const BitVector& sequence);
double joint_entropy(const BitVector& x, const BitVector& y);
double joint_entropy(const JointCounts& c) noexcept;

/// H(Y|X) via the chain rule H(X,Y) - H(X).
double conditional_entropy(const BitVector& y, const BitVector& given_x);
/// H(Y|X) = -sum p(x,y) ln p(y|x), summed directly.
double conditional_entropy_direct(const BitVector& y, const BitVector& given_x);

/// I(X;Y) = H(X) + H(Y) - H(X,Y). Exactly 0 when the empirical joint
/// distribution factorizes; negatives above -1e-12 clamp to 0.
double mutual_information(const BitVector& x, const BitVector& y);
double mutual_information(const JointCounts& c) noexcept;
/// I(X;Y) = sum p(x,y) ln(p(x,y) / (p(x) p(y))), summed directly.
double mutual_information_direct(const BitVector& x, const BitVector& y);

}  // namespace htdet

#endif  // HTDET_INFOTHEORY_HPP
