#pragma once

#include <cmath>
#include <span>

namespace wscs_rdf {

// Neumaier-compensated accumulator.
class CompensatedSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    CompensatedSum& operator+=(double x) {
        add(x);
        return *this;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
    CompensatedSum s;
    for (double x : xs) {
        s.add(x);
    }
    return s.value();
}

inline double mean(std::span<const double> xs) {
    return xs.empty() ? 0.0 : compensated_sum(xs) / static_cast<double>(xs.size());
}

// Unbiased sample standard deviation (0 for fewer than two samples).
inline double sample_stddev(std::span<const double> xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    const double mu = mean(xs);
    CompensatedSum s;
    for (double x : xs) {
        s.add((x - mu) * (x - mu));
    }
    return std::sqrt(s.value() / static_cast<double>(xs.size() - 1));
}

} // namespace wscs_rdf
