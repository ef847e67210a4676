#pragma once

#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "axired/eval.hpp"

namespace axired {

struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Interval a coordinate is sampled from; margins keep samples away from
/// singular loci (axis, horizon, ...).
struct CoordBox {
    double lo = 0, hi = 1;
    double margin = 0;
    double inner_lo() const { return lo + margin; }
    double inner_hi() const { return hi - margin; }
};

struct Chart {
    std::vector<std::string> coords;
    std::vector<CoordBox> box;                // parallel to coords
    std::map<std::string, double> params;     // parameter name -> default value
    bool positively_oriented = true;

    const CoordBox& box_of(const std::string& c) const {
        for (size_t i = 0; i < coords.size(); ++i)
            if (coords[i] == c) return box[i];
        throw ChartError("no such coordinate: " + c);
    }

    void validate() const {
        if (coords.size() != box.size()) throw ChartError("box/coords size mismatch");
        for (size_t i = 0; i < coords.size(); ++i) {
            if (!(box[i].inner_lo() < box[i].inner_hi()))
                throw ChartError("empty sampling box for coordinate " + coords[i]);
            for (size_t j = i + 1; j < coords.size(); ++j)
                if (coords[i] == coords[j]) throw ChartError("duplicate coordinate " + coords[i]);
        }
    }

    /// Quasi-random (randomized Halton) interior points, deterministic per seed.
    std::vector<Binding> sample(size_t n, unsigned seed = 42) const {
        validate();
        static const int primes[] = {2, 3, 5, 7, 11, 13};
        if (coords.size() > 6) throw ChartError("too many coordinates for sampler");
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        std::vector<double> shift(coords.size());
        for (auto& s : shift) s = unif(rng);
        std::vector<Binding> out;
        out.reserve(n);
        for (size_t k = 0; k < n; ++k) {
            Binding b = params;
            for (size_t d = 0; d < coords.size(); ++d) {
                double h = halton(k + 1, primes[d]);
                double u = h + shift[d];
                u -= std::floor(u);
                b[coords[d]] = box[d].inner_lo() + u * (box[d].inner_hi() - box[d].inner_lo());
            }
            out.push_back(std::move(b));
        }
        return out;
    }

private:
    static double halton(size_t i, int base) {
        double f = 1.0, r = 0.0;
        while (i > 0) {
            f /= base;
            r += f * static_cast<double>(i % base);
            i /= base;
        }
        return r;
    }
};

} // namespace axired
