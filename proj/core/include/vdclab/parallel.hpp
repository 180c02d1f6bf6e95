#ifndef VDCLAB_PARALLEL_HPP
#define VDCLAB_PARALLEL_HPP

#include <cstdint>
#include <thread>
#include <vector>

namespace vdclab {

// Chunked parallel map-reduce over an index range. Each worker fills a
// local accumulator; partials are combined in chunk order, so reductions
// that are order-sensitive only up to floating-point reassociation stay
// deterministic for a fixed thread count, and exact (integer/rational)
// reductions are identical to the sequential result for any thread count.
//
// Acc must be default-constructible. body(acc, begin, end) processes one
// index chunk; combine(total, partial) folds partials left to right.
template <typename Acc, typename Body, typename Combine>
Acc parallel_reduce(std::uint64_t n, unsigned threads, Body body, Combine combine) {
    if (threads <= 1 || n < 2) {
        Acc acc{};
        body(acc, std::uint64_t{0}, n);
        return acc;
    }
    unsigned t = threads;
    if (static_cast<std::uint64_t>(t) > n) t = static_cast<unsigned>(n);
    std::vector<Acc> partials(t);
    std::vector<std::thread> pool;
    pool.reserve(t);
    std::uint64_t chunk = n / t, rem = n % t, begin = 0;
    for (unsigned i = 0; i < t; ++i) {
        std::uint64_t len = chunk + (i < rem ? 1 : 0);
        std::uint64_t end = begin + len;
        pool.emplace_back([&partials, i, begin, end, &body] { body(partials[i], begin, end); });
        begin = end;
    }
    for (auto& th : pool) th.join();
    Acc total{};
    for (unsigned i = 0; i < t; ++i) combine(total, partials[i]);
    return total;
}

}  // namespace vdclab

#endif
