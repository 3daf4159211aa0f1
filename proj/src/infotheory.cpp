#include "htdet/infotheory.hpp"

#include <array>
#include <cmath>
#include <string>

#include "htdet/error.hpp"

namespace htdet {

namespace {

double plogp(double p) noexcept { return p > 0.0 ? p * std::log(p) : 0.0; }

void check_same_length(const BitVector& x, const BitVector& y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::LengthMismatch, "sequence lengths differ: " + std::to_string(x.size()) +
                                               " vs " + std::to_string(y.size()));
  }
  if (x.empty()) throw Error(ErrorCode::EmptySequence, "empty sequence");
}

}  // namespace

JointCounts joint_counts(const BitVector& x, const BitVector& y) {
  check_same_length(x, y);
  const std::size_t n = x.size();
  const std::size_t n11 = count_and(x, y);
  const std::size_t nx = x.count();
  const std::size_t ny = y.count();
  return JointCounts{n - nx - ny + n11, ny - n11, nx - n11, n11};
}

double binary_entropy(double p) noexcept { return 0.0 - (plogp(p) + plogp(1.0 - p)); }

double entropy_from_counts(std::size_t ones, std::size_t n) noexcept {
  if (n == 0) return 0.0;
  const double dn = static_cast<double>(n);
  return 0.0 - (plogp(static_cast<double>(ones) / dn) + plogp(static_cast<double>(n - ones) / dn));
}

double entropy(const BitVector& sequence) {
  if (sequence.empty()) throw Error(ErrorCode::EmptySequence, "entropy of an empty sequence");
  return entropy_from_counts(sequence.count(), sequence.size());
}

double joint_entropy(const JointCounts& c) noexcept {
  const double n = static_cast<double>(c.total());
  if (n == 0.0) return 0.0;
  return 0.0 - (plogp(static_cast<double>(c.n00) / n) + plogp(static_cast<double>(c.n01) / n) +
           plogp(static_cast<double>(c.n10) / n) + plogp(static_cast<double>(c.n11) / n));
}

double joint_entropy(const BitVector& x, const BitVector& y) { return joint_entropy(joint_counts(x, y)); }

double conditional_entropy(const BitVector& y, const BitVector& given_x) {
  const JointCounts c = joint_counts(given_x, y);
  return joint_entropy(c) - entropy_from_counts(c.x_ones(), c.total());
}

double conditional_entropy_direct(const BitVector& y, const BitVector& given_x) {
  const JointCounts c = joint_counts(given_x, y);
  const double n = static_cast<double>(c.total());
  // cells indexed [x][y]
  const std::array<std::array<double, 2>, 2> cell{{{static_cast<double>(c.n00), static_cast<double>(c.n01)},
                                                   {static_cast<double>(c.n10), static_cast<double>(c.n11)}}};
  double h = 0.0;
  for (int x = 0; x < 2; ++x) {
    const double nx = cell[x][0] + cell[x][1];
    for (int yv = 0; yv < 2; ++yv) {
      if (cell[x][yv] == 0.0) continue;
      h -= (cell[x][yv] / n) * std::log(cell[x][yv] / nx);
    }
  }
  return h;
}

__extension__ using u128 = unsigned __int128;

double mutual_information(const JointCounts& c) noexcept {
  const std::size_t n = c.total();
  // Empirical independence: every cell factorizes when n11 * n == nx * ny.
  if (static_cast<u128>(c.n11) * n ==
      static_cast<u128>(c.x_ones()) * c.y_ones()) {
    return 0.0;
  }
  const double mi = entropy_from_counts(c.x_ones(), n) + entropy_from_counts(c.y_ones(), n) - joint_entropy(c);
  return (mi < 0.0 && mi > -1e-12) ? 0.0 : mi;
}

double mutual_information(const BitVector& x, const BitVector& y) {
  return mutual_information(joint_counts(x, y));
}

double mutual_information_direct(const BitVector& x, const BitVector& y) {
  const JointCounts c = joint_counts(x, y);
  const double n = static_cast<double>(c.total());
  const std::array<std::array<double, 2>, 2> cell{{{static_cast<double>(c.n00), static_cast<double>(c.n01)},
                                                   {static_cast<double>(c.n10), static_cast<double>(c.n11)}}};
  const std::array<double, 2> px{(cell[0][0] + cell[0][1]) / n, (cell[1][0] + cell[1][1]) / n};
  const std::array<double, 2> py{(cell[0][0] + cell[1][0]) / n, (cell[0][1] + cell[1][1]) / n};
  double mi = 0.0;
  for (int xv = 0; xv < 2; ++xv) {
    for (int yv = 0; yv < 2; ++yv) {
      const double pxy = cell[xv][yv] / n;
      if (pxy == 0.0) continue;
      mi += pxy * std::log(pxy / (px[xv] * py[yv]));
    }
  }
  return mi;
}

}  // namespace htdet
