#pragma once

#include <cstddef>
#include <vector>

namespace iqpsim {

// Additive-error budget from the lattice hardness result; used in reports
// only, never as a pass/fail gate.
inline constexpr double kHardnessThreshold = 1.0 / 22.0;

// One trial's comparison data. n_outcomes = 2^n defines the uniform value
// 1/n_outcomes; stored as a double since n can exceed 64 bits' worth.
struct RunSummary {
    double perfect_value = 0.0;
    double noisy_mean = 0.0;
    double noisy_std = 0.0;
    double n_outcomes = 1.0;
};

// Coefficient of determination 1 - r/v with r the residual and v the total
// sum of squares. Throws on a length mismatch or when the targets have zero
// variance. May be negative for worse-than-mean models; never exceeds 1.
double r_squared(const std::vector<double>& targets, const std::vector<double>& models);

// True when the perfect value is more than twice, or less than half, the
// uniform value.
bool far_from_uniform(double perfect_value, double n_outcomes);

enum class Classification { dismissive, non_dismissive };

// A trial is dismissive when the noisy mean sits within one standard
// deviation of the uniform value, or more than one standard deviation from
// the perfect value. Only non-dismissive trials with far-from-uniform
// perfect values count toward advantage plausibility.
Classification advantage_consistency(const RunSummary& s);

const char* classification_name(Classification c);

// Mean |noisy_mean - perfect| over trials, scaled by n_outcomes (the
// normalization by the uniform value).
double l1_proxy(const std::vector<double>& perfect_values,
                const std::vector<double>& noisy_means, double n_outcomes);

// Sample mean and standard deviation (n-1 denominator; 0 for fewer than two
// values).
double mean(const std::vector<double>& values);
double sample_std(const std::vector<double>& values);

}  // namespace iqpsim
