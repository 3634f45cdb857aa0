#include "iqpsim/merit.hpp"

#include <cmath>
#include <stdexcept>

namespace iqpsim {

double mean(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean: empty sequence");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / double(values.size());
}

double sample_std(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / double(values.size() - 1));
}

double r_squared(const std::vector<double>& targets, const std::vector<double>& models) {
    if (targets.size() != models.size())
        throw std::invalid_argument("r_squared: length mismatch");
    if (targets.empty())
        throw std::invalid_argument("r_squared: empty sequences");
    const double d_bar = mean(targets);
    double residual = 0.0, total = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        residual += (targets[i] - models[i]) * (targets[i] - models[i]);
        total += (targets[i] - d_bar) * (targets[i] - d_bar);
    }
    if (total == 0.0)
        throw std::invalid_argument("r_squared: targets have zero variance");
    return 1.0 - residual / total;
}

bool far_from_uniform(double perfect_value, double n_outcomes) {
    const double uniform = 1.0 / n_outcomes;
    return perfect_value > 2.0 * uniform || perfect_value < 0.5 * uniform;
}

Classification advantage_consistency(const RunSummary& s) {
    const double uniform = 1.0 / s.n_outcomes;
    const bool near_uniform = std::abs(s.noisy_mean - uniform) <= s.noisy_std;
    const bool off_perfect = std::abs(s.noisy_mean - s.perfect_value) > s.noisy_std;
    return (near_uniform || off_perfect) ? Classification::dismissive
                                         : Classification::non_dismissive;
}

const char* classification_name(Classification c) {
    return c == Classification::dismissive ? "dismissive" : "non-dismissive";
}

double l1_proxy(const std::vector<double>& perfect_values,
                const std::vector<double>& noisy_means, double n_outcomes) {
    if (perfect_values.size() != noisy_means.size())
        throw std::invalid_argument("l1_proxy: length mismatch");
    if (perfect_values.empty())
        throw std::invalid_argument("l1_proxy: empty sequences");
    double acc = 0.0;
    for (std::size_t i = 0; i < perfect_values.size(); ++i)
        acc += std::abs(noisy_means[i] - perfect_values[i]);
    return acc * n_outcomes / double(perfect_values.size());
}

}  // namespace iqpsim
