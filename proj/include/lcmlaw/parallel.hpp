#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lcmlaw {

// Runs work(block, acc) for block = 0..blocks-1 on up to `threads` workers.
// Each block owns its accumulator, so results do not depend on scheduling;
// callers merge the returned vector in block order. The first exception
// thrown by any block is rethrown after all workers join.
template <class Acc, class Make, class Work>
std::vector<Acc> run_blocks(std::size_t blocks, unsigned threads, Make&& make, Work&& work)
{
    std::vector<Acc> accs;
    accs.reserve(blocks);
    for (std::size_t b = 0; b < blocks; ++b) accs.push_back(make());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= blocks) return;
            try {
                work(b, accs[b]);
            } catch (...) {
                std::lock_guard lock(failure_mu);
                if (!failure) failure = std::current_exception();
                next.store(blocks);
                return;
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(blocks)));
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return accs;
}

// Neumaier compensated sum.
struct CompensatedSum {
    long double sum = 0.0L;
    long double carry = 0.0L;

    void add(long double v)
    {
        const long double t = sum + v;
        if (std::abs(sum) >= std::abs(v)) carry += (sum - t) + v;
        else carry += (v - t) + sum;
        sum = t;
    }
    void add(const CompensatedSum& o)
    {
        add(o.sum);
        add(o.carry);
    }
    long double value() const { return sum + carry; }
};

} // namespace lcmlaw
