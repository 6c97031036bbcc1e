// SPDX-License-Identifier: Apache-2.0
//
// Fixed-chunk parallel map with ordered reduction. Results do not depend on
// the thread count: chunk boundaries are fixed, each chunk is accumulated
// sequentially, and chunk results are merged in chunk order.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace eulerlab {

struct Parallelism {
    /// 0 selects EULERLAB_THREADS or the hardware concurrency.
    unsigned threads = 0;
    std::uint64_t chunk_size = 512;

    unsigned resolved_threads() const {
        if (threads > 0) return threads;
        if (const char* env = std::getenv("EULERLAB_THREADS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v > 0) return static_cast<unsigned>(v);
        }
        return std::max(1u, std::thread::hardware_concurrency());
    }
};

/*!
 * Apply body(acc, item) to items [0, n) and return one accumulator per chunk,
 * in chunk order. Acc must be copyable from init.
 */
template <class Acc, class Body>
std::vector<Acc> map_chunks(std::uint64_t n_items, const Parallelism& par,
                            const Acc& init, Body&& body) {
    const std::uint64_t chunk = std::max<std::uint64_t>(1, par.chunk_size);
    const std::uint64_t n_chunks = (n_items + chunk - 1) / chunk;
    std::vector<Acc> results(n_chunks, init);

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= n_chunks) return;
            try {
                Acc& acc = results[c];
                const std::uint64_t end = std::min(n_items, (c + 1) * chunk);
                for (std::uint64_t i = c * chunk; i < end; ++i) body(acc, i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_chunks);
                return;
            }
        }
    };

    const auto n_threads = static_cast<std::uint64_t>(
        std::min<std::uint64_t>(par.resolved_threads(), n_chunks));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_threads);
        for (std::uint64_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

/// map_chunks followed by an in-order merge via Acc::merge.
template <class Acc, class Body>
Acc reduce_chunks(std::uint64_t n_items, const Parallelism& par,
                  const Acc& init, Body&& body) {
    auto parts = map_chunks(n_items, par, init, std::forward<Body>(body));
    Acc total = init;
    for (const auto& p : parts) total.merge(p);
    return total;
}

//---------------------------------------------------------------------------//
// Running moments
//---------------------------------------------------------------------------//

/// Welford mean/variance with Chan's pairwise merge.
class RunningStats {
  public:
    void add(double x) noexcept {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningStats& o) noexcept {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const double n = static_cast<double>(n_ + o.n_);
        const double delta = o.mean_ - mean_;
        mean_ += delta * static_cast<double>(o.n_) / n;
        m2_ += o.m2_ + delta * delta * static_cast<double>(n_) *
                           static_cast<double>(o.n_) / n;
        n_ += o.n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    double mean() const noexcept { return mean_; }
    double variance() const noexcept {
        return n_ > 1 ? std::max(0.0, m2_ / static_cast<double>(n_ - 1)) : 0.0;
    }
    double stderr_of_mean() const noexcept {
        return n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }

  private:
    std::uint64_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

/// Mean vector and co-moment matrix of a d-dimensional sample.
class RunningCovariance {
  public:
    RunningCovariance() = default;
    explicit RunningCovariance(std::size_t dim)
        : mean_(dim, 0.0), comoment_(dim * dim, 0.0), delta_(dim, 0.0) {}

    std::size_t dim() const noexcept { return mean_.size(); }

    template <class Range>
    void add(const Range& x) noexcept {
        ++n_;
        const double inv_n = 1.0 / static_cast<double>(n_);
        const std::size_t d = dim();
        for (std::size_t i = 0; i < d; ++i) {
            delta_[i] = x[i] - mean_[i];
            mean_[i] += delta_[i] * inv_n;
        }
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                comoment_[i * d + j] += delta_[i] * (x[j] - mean_[j]);
    }

    void merge(const RunningCovariance& o) noexcept {
        if (o.n_ == 0) return;
        if (n_ == 0) {
            *this = o;
            return;
        }
        const std::size_t d = dim();
        const double na = static_cast<double>(n_);
        const double nb = static_cast<double>(o.n_);
        const double n = na + nb;
        for (std::size_t i = 0; i < d; ++i) delta_[i] = o.mean_[i] - mean_[i];
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                comoment_[i * d + j] += o.comoment_[i * d + j] +
                                        delta_[i] * delta_[j] * na * nb / n;
        for (std::size_t i = 0; i < d; ++i) mean_[i] += delta_[i] * nb / n;
        n_ += o.n_;
    }

    std::uint64_t count() const noexcept { return n_; }
    const std::vector<double>& mean() const noexcept { return mean_; }
    double covariance(std::size_t i, std::size_t j) const noexcept {
        return n_ > 1 ? comoment_[i * dim() + j] / static_cast<double>(n_ - 1)
                      : 0.0;
    }

  private:
    std::uint64_t n_ = 0;
    std::vector<double> mean_;
    std::vector<double> comoment_;
    std::vector<double> delta_;
};

}  // namespace eulerlab
