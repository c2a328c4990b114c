#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "dimred/types.hpp"

namespace dimred::numkernel {

/// Sparse symmetric matrix assembled from (i, j, value) triplets with
/// structural symmetry; stored fully (both triangles) in CSR for fast apply.
class SparseSym {
  public:
    explicit SparseSym(index_t dim) : dim_(dim) {}

    index_t size() const { return dim_; }

    void add(index_t i, index_t j, double v) {
        if (!std::isfinite(v)) throw numerical_error("SparseSym: non-finite entry");
        if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
            throw numerical_error("SparseSym: index out of range");
        trip_.push_back({i, j, v});
        if (i != j) trip_.push_back({j, i, v});
        compiled_ = false;
    }

    void compile() const {
        if (compiled_) return;
        std::vector<std::tuple<index_t, index_t, double>> t;
        t.reserve(trip_.size());
        for (const auto& e : trip_) t.emplace_back(e.i, e.j, e.v);
        std::sort(t.begin(), t.end(), [](const auto& a, const auto& b) {
            return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
        });
        row_ptr_.assign(static_cast<size_t>(dim_) + 1, 0);
        col_.clear();
        val_.clear();
        for (size_t k = 0; k < t.size();) {
            const index_t i = std::get<0>(t[k]), j = std::get<1>(t[k]);
            double s = 0.0;
            while (k < t.size() && std::get<0>(t[k]) == i && std::get<1>(t[k]) == j)
                s += std::get<2>(t[k++]);
            col_.push_back(j);
            val_.push_back(s);
            ++row_ptr_[static_cast<size_t>(i) + 1];
        }
        for (index_t i = 0; i < dim_; ++i)
            row_ptr_[static_cast<size_t>(i) + 1] += row_ptr_[static_cast<size_t>(i)];
        compiled_ = true;
    }

    std::vector<double> apply(const std::vector<double>& x) const {
        compile();
        std::vector<double> y(static_cast<size_t>(dim_), 0.0);
        for (index_t i = 0; i < dim_; ++i) {
            double s = 0.0;
            for (index_t k = row_ptr_[static_cast<size_t>(i)]; k < row_ptr_[static_cast<size_t>(i) + 1]; ++k)
                s += val_[static_cast<size_t>(k)] * x[static_cast<size_t>(col_[static_cast<size_t>(k)])];
            y[static_cast<size_t>(i)] = s;
        }
        return y;
    }

    struct Triplet {
        index_t i, j;
        double v;
    };
    const std::vector<Triplet>& triplets() const { return trip_; }

  private:
    index_t dim_;
    std::vector<Triplet> trip_;
    mutable bool compiled_ = false;
    mutable std::vector<index_t> row_ptr_, col_;
    mutable std::vector<double> val_;
};

} // namespace dimred::numkernel
