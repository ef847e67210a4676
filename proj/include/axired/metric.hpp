#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "axired/chart.hpp"
#include "axired/zero.hpp"

namespace axired {

struct SingularMetricError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Signature { Riemannian, Lorentzian };

/// Symmetric matrix of symbolic components over a chart.
class MetricSpec {
public:
    MetricSpec() = default;
    MetricSpec(Chart chart, Signature sig, int time_index = 0)
        : chart_(std::move(chart)), sig_(sig), time_index_(sig == Signature::Lorentzian ? time_index : -1) {
        n_ = chart_.coords.size();
        comps_.assign(n_ * n_, zero_expr());
    }

    size_t dim() const { return n_; }
    const Chart& chart() const { return chart_; }
    Chart& chart() { return chart_; }
    Signature signature() const { return sig_; }
    int time_index() const { return time_index_; }

    const ExprPtr& at(size_t i, size_t j) const { return comps_[i * n_ + j]; }

    void set(size_t i, size_t j, ExprPtr e) {
        comps_[i * n_ + j] = e;
        comps_[j * n_ + i] = std::move(e);  // symmetric by construction
    }

    const std::string& coord(size_t i) const { return chart_.coords[i]; }

    /// determinant via cofactor expansion (n <= 4)
    ExprPtr determinant() const {
        std::vector<std::vector<ExprPtr>> m(n_, std::vector<ExprPtr>(n_));
        for (size_t i = 0; i < n_; ++i)
            for (size_t j = 0; j < n_; ++j) m[i][j] = at(i, j);
        return det_rec(m);
    }

    /// Signature and non-degeneracy checks at sample points.
    void validate(unsigned seed = 42) const {
        chart_.validate();
        ExprPtr det = determinant();
        if (is_zero(det, chart_, 20, seed) == ZeroVerdict::ProvablyZero)
            throw SingularMetricError("metric determinant is identically zero");
        for (const auto& b : chart_.sample(20, seed)) {
            double d = evaluate(det, b);
            if (sig_ == Signature::Lorentzian && !(d < 0))
                throw SingularMetricError("Lorentzian metric with det >= 0 at a sample point");
            if (sig_ == Signature::Riemannian && !(d > 0))
                throw SingularMetricError("Riemannian metric with det <= 0 at a sample point");
        }
    }

    static ExprPtr det_rec(const std::vector<std::vector<ExprPtr>>& m) {
        size_t n = m.size();
        if (n == 1) return m[0][0];
        std::vector<ExprPtr> terms;
        for (size_t j = 0; j < n; ++j) {
            if (is_zero_literal(m[0][j])) continue;
            std::vector<std::vector<ExprPtr>> minor;
            for (size_t i = 1; i < n; ++i) {
                std::vector<ExprPtr> row;
                for (size_t k = 0; k < n; ++k)
                    if (k != j) row.push_back(m[i][k]);
                minor.push_back(std::move(row));
            }
            ExprPtr t = m[0][j] * det_rec(minor);
            terms.push_back(j % 2 == 0 ? t : make_neg(t));
        }
        return make_sum(std::move(terms));
    }

private:
    Chart chart_;
    Signature sig_ = Signature::Riemannian;
    int time_index_ = -1;
    size_t n_ = 0;
    std::vector<ExprPtr> comps_;
};

/// Dense array of symbolic components with explicit valence, e.g. "^a_bc"
/// for Christoffel symbols. Index order in the flat array follows the
/// valence string left to right.
class TensorField {
public:
    TensorField() = default;
    TensorField(std::string valence, size_t dim, Chart chart)
        : valence_(std::move(valence)), dim_(dim), chart_(std::move(chart)) {
        rank_ = 0;
        for (char c : valence_)
            if (c != '^' && c != '_') ++rank_;
        size_t total = 1;
        for (size_t i = 0; i < rank_; ++i) total *= dim_;
        comps_.assign(total, zero_expr());
    }

    size_t rank() const { return rank_; }
    size_t dim() const { return dim_; }
    const std::string& valence() const { return valence_; }
    const Chart& chart() const { return chart_; }

    size_t flat(std::initializer_list<size_t> idx) const {
        size_t f = 0;
        for (size_t i : idx) f = f * dim_ + i;
        return f;
    }

    const ExprPtr& at(std::initializer_list<size_t> idx) const { return comps_[flat(idx)]; }
    void set(std::initializer_list<size_t> idx, ExprPtr e) { comps_[flat(idx)] = std::move(e); }

    const std::vector<ExprPtr>& components() const { return comps_; }
    std::vector<ExprPtr>& components() { return comps_; }

    /// max |component| over sampled chart points
    double max_abs(size_t points = 20, unsigned seed = 42) const {
        double m = 0;
        for (const auto& b : chart_.sample(points, seed)) {
            Evaluator ev(b);
            for (const auto& c : comps_) m = std::max(m, std::abs(ev(c)));
        }
        return m;
    }

private:
    std::string valence_;
    size_t dim_ = 0;
    size_t rank_ = 0;
    Chart chart_;
    std::vector<ExprPtr> comps_;
};

} // namespace axired
