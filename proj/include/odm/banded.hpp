/// @file banded.hpp
/// @brief LU factorization of complex banded matrices with partial pivoting.

#ifndef ODM_BANDED_HPP
#define ODM_BANDED_HPP

#include "complex.hpp"
#include "numeric.hpp"

#include <cstddef>
#include <vector>

namespace odm {

/// Band storage with room for pivoting fill-in: entry (i, j) lives at
/// row kl + ku + i - j of column j; factored U has bandwidth kl + ku.
class BandedLU {
public:
    BandedLU(std::size_t n, std::size_t kl, std::size_t ku)
        : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1),
          ab_(ldab_ * n), piv_(n) {
        if (n == 0) throw domain_error("banded_lu: empty matrix");
    }

    std::size_t size() const { return n_; }

    /// Valid for |i - j| within the declared bands (plus fill-in rows).
    Cplx& at(std::size_t i, std::size_t j) {
        return ab_[j * ldab_ + (kl_ + ku_ + i - j)];
    }
    const Cplx& at(std::size_t i, std::size_t j) const {
        return ab_[j * ldab_ + (kl_ + ku_ + i - j)];
    }

    void factor() {
        for (std::size_t j = 0; j < n_; ++j) {
            std::size_t ilim = std::min(j + kl_, n_ - 1);
            std::size_t kp = j;
            Real vmax = abs(at(j, j));
            for (std::size_t i = j + 1; i <= ilim; ++i) {
                Real v = abs(at(i, j));
                if (v > vmax) { vmax = v; kp = i; }
            }
            piv_[j] = kp;
            if (vmax == 0)
                throw convergence_error("banded_lu: zero pivot column " + std::to_string(j));
            std::size_t jlim = std::min(j + kl_ + ku_, n_ - 1);
            if (kp != j)
                for (std::size_t jj = j; jj <= jlim; ++jj)
                    std::swap(at(kp, jj), at(j, jj));
            Cplx pivval = at(j, j);
            for (std::size_t i = j + 1; i <= ilim; ++i) {
                Cplx m = at(i, j) / pivval;
                at(i, j) = m;
                for (std::size_t jj = j + 1; jj <= jlim; ++jj)
                    at(i, jj) -= m * at(j, jj);
            }
        }
        factored_ = true;
    }

    void solve(std::vector<Cplx>& b) const {
        if (!factored_) throw domain_error("banded_lu: solve before factor");
        if (b.size() != n_) throw domain_error("banded_lu: rhs size mismatch");
        for (std::size_t j = 0; j + 1 < n_; ++j) {
            std::swap(b[j], b[piv_[j]]);
            std::size_t ilim = std::min(j + kl_, n_ - 1);
            for (std::size_t i = j + 1; i <= ilim; ++i)
                b[i] -= at(i, j) * b[j];
        }
        for (std::size_t j = n_; j-- > 0;) {
            b[j] /= at(j, j);
            std::size_t i0 = (j > kl_ + ku_) ? j - kl_ - ku_ : 0;
            for (std::size_t i = i0; i < j; ++i)
                b[i] -= at(i, j) * b[j];
        }
    }

private:
    std::size_t n_, kl_, ku_, ldab_;
    std::vector<Cplx> ab_;
    std::vector<std::size_t> piv_;
    bool factored_ = false;
};

} // namespace odm

#endif
