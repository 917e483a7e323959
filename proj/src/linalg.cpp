#include "uab/linalg.hpp"

#include <cmath>
#include <stdexcept>

namespace uab {

double mean(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("mean: empty input");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values) {
    if (values.size() < 2) throw std::invalid_argument("sample_std: need at least 2 values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("pearson_correlation: length mismatch");
    if (a.size() < 2) throw std::invalid_argument("pearson_correlation: need at least 2 values");
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    const double denom = std::sqrt(saa * sbb);
    if (denom == 0.0) throw std::invalid_argument("pearson_correlation: zero variance input");
    return sab / denom;
}

}  // namespace uab
