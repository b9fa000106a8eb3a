#include "levelcurve/otsu.hpp"

#include <algorithm>
#include <cmath>

namespace levelcurve {

std::array<std::int64_t, 256> histogram256(const ScalarField& image) {
    std::array<std::int64_t, 256> h{};
    for (double v : image.values) {
        const int bin = std::clamp(static_cast<int>(std::lround(v)), 0, 255);
        ++h[static_cast<std::size_t>(bin)];
    }
    return h;
}

namespace {

// Cumulative pixel counts and first moments; all integer-valued and exact in
// double for any 8-bit image of practical size.
struct Cumulative {
    std::array<double, 257> weight{}; // weight[i] = count of bins < i
    std::array<double, 257> moment{};

    explicit Cumulative(const std::array<std::int64_t, 256>& h) {
        for (int i = 0; i < 256; ++i) {
            weight[static_cast<std::size_t>(i + 1)] =
                weight[static_cast<std::size_t>(i)] + static_cast<double>(h[static_cast<std::size_t>(i)]);
            moment[static_cast<std::size_t>(i + 1)] =
                moment[static_cast<std::size_t>(i)] +
                static_cast<double>(h[static_cast<std::size_t>(i)]) * i;
        }
    }

    // Between-class contribution of the class covering bins (a, b], expressed
    // as sum_c musum^2 / omega (maximizing it is equivalent to maximizing the
    // between-class variance).
    double score(int a, int b) const {
        const double w = weight[static_cast<std::size_t>(b + 1)] - weight[static_cast<std::size_t>(a + 1)];
        if (w <= 0.0) return 0.0;
        const double m = moment[static_cast<std::size_t>(b + 1)] - moment[static_cast<std::size_t>(a + 1)];
        return m * m / w;
    }
};

int distinct_bins(const std::array<std::int64_t, 256>& h) {
    int n = 0;
    for (auto c : h) n += (c != 0);
    return n;
}

void search_tuples(const Cumulative& cum, int t_count, int depth, int start, double acc,
                   std::vector<int>& current, double& best_score, std::vector<int>& best) {
    if (depth == t_count) {
        const double total = acc + cum.score(current.back(), 255);
        if (total > best_score) {
            best_score = total;
            best = current;
        }
        return;
    }
    const int prev = depth == 0 ? -1 : current[static_cast<std::size_t>(depth - 1)];
    for (int t = start; t <= 255 - (t_count - depth); ++t) {
        current[static_cast<std::size_t>(depth)] = t;
        search_tuples(cum, t_count, depth + 1, t + 1, acc + cum.score(prev, t), current,
                      best_score, best);
    }
}

} // namespace

int otsu(const ScalarField& image) {
    const auto h = histogram256(image);
    if (distinct_bins(h) < 2) throw ConstantImage();
    const Cumulative cum(h);
    int best_t = 0;
    double best_score = -1.0;
    for (int t = 0; t <= 255; ++t) {
        const double s = cum.score(-1, t) + cum.score(t, 255);
        if (s > best_score) {
            best_score = s;
            best_t = t;
        }
    }
    return best_t;
}

MultiOtsuResult multi_otsu(const ScalarField& image, int t_count) {
    if (t_count < 1 || t_count > 5) throw ValidationError("t_count must be in 1..5");
    const auto h = histogram256(image);
    if (distinct_bins(h) <= t_count) throw ConstantImage();
    const Cumulative cum(h);

    std::vector<int> current(static_cast<std::size_t>(t_count));
    std::vector<int> best;
    double best_score = -1.0;
    search_tuples(cum, t_count, 0, 0, 0.0, current, best_score, best);

    MultiOtsuResult r;
    r.thresholds = best;
    r.labels.resize(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        const int bin = std::clamp(static_cast<int>(std::lround(image.values[i])), 0, 255);
        int label = 0;
        while (label < t_count && bin > best[static_cast<std::size_t>(label)]) ++label;
        r.labels[i] = label;
    }
    return r;
}

Mask merge_classes(const MultiOtsuResult& result, int width, int height,
                   const std::vector<int>& classes) {
    Mask m(width, height);
    for (std::size_t i = 0; i < result.labels.size(); ++i)
        for (int c : classes)
            if (result.labels[i] == c) {
                m.values[i] = 1;
                break;
            }
    return m;
}

} // namespace levelcurve
