#pragma once

#include <cmath>
#include <stdexcept>

namespace ccn {

// Discretized bid support [v_min, v_max] with quantization step delta and
// levels() + 1 grid points, value(k) = v_min + k * delta.
class BidGrid {
public:
  BidGrid(double v_min, double v_max, double delta)
      : v_min_(v_min), v_max_(v_max), delta_(delta) {
    if (!(delta > 0.0)) throw std::invalid_argument("BidGrid: delta must be > 0");
    if (!(v_max > v_min)) throw std::invalid_argument("BidGrid: v_max must exceed v_min");
    const double steps = (v_max - v_min) / delta;
    levels_ = static_cast<int>(std::llround(steps));
    if (levels_ < 1 || std::abs(levels_ * delta - (v_max - v_min)) > 1e-9 * delta)
      throw std::invalid_argument("BidGrid: v_max - v_min must be an integer multiple of delta");
  }

  double v_min() const { return v_min_; }
  double v_max() const { return v_max_; }
  double delta() const { return delta_; }
  // Highest grid index L; valid indices are 0..L.
  int levels() const { return levels_; }
  int size() const { return levels_ + 1; }

  double value(int k) const { return v_min_ + k * delta_; }

  bool operator==(const BidGrid& o) const {
    return v_min_ == o.v_min_ && v_max_ == o.v_max_ && delta_ == o.delta_;
  }

private:
  double v_min_, v_max_, delta_;
  int levels_;
};

}  // namespace ccn
