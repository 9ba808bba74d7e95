#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace modsys {

enum class Execution { Serial, Parallel };

// Parallel unless MODSYS_SERIAL=1.
Execution default_execution();

namespace kernels {

inline constexpr std::uint64_t kChunkBits = 14;

// Keeps every mask in [0, count) satisfying pred, in ascending order.
// The serial branch is the reference implementation; the OpenMP branch
// partitions the range into chunks and concatenates them in chunk order,
// so both produce identical bytes.
template <class Pred>
std::vector<std::uint64_t> filter_masks(std::uint64_t count, Execution exec, Pred&& pred) {
    std::vector<std::uint64_t> out;
    if (exec == Execution::Serial) {
        for (std::uint64_t m = 0; m < count; ++m)
            if (pred(m)) out.push_back(m);
        return out;
    }
    const std::uint64_t chunk = std::uint64_t{1} << kChunkBits;
    const std::uint64_t nchunks = (count + chunk - 1) / chunk;
    std::vector<std::vector<std::uint64_t>> parts(nchunks);
#pragma omp parallel for schedule(dynamic)
    for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
        const std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
        const std::uint64_t hi = std::min(count, lo + chunk);
        std::vector<std::uint64_t> local;
        for (std::uint64_t m = lo; m < hi; ++m)
            if (pred(m)) local.push_back(m);
        parts[static_cast<std::size_t>(c)] = std::move(local);
    }
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

// Runs gen(mask, sink) for every mask in [0, count) where sink is a
// vector<uint64_t>&; returns the union of all emitted values, sorted and
// deduplicated. Order-insensitive by construction.
template <class Gen>
std::vector<std::uint64_t> collect_masks(std::uint64_t count, Execution exec, Gen&& gen) {
    std::vector<std::uint64_t> out;
    if (exec == Execution::Serial) {
        for (std::uint64_t m = 0; m < count; ++m) gen(m, out);
    } else {
        const std::uint64_t chunk = std::uint64_t{1} << kChunkBits;
        const std::uint64_t nchunks = (count + chunk - 1) / chunk;
        std::vector<std::vector<std::uint64_t>> parts(nchunks);
#pragma omp parallel for schedule(dynamic)
        for (long long c = 0; c < static_cast<long long>(nchunks); ++c) {
            const std::uint64_t lo = static_cast<std::uint64_t>(c) * chunk;
            const std::uint64_t hi = std::min(count, lo + chunk);
            std::vector<std::uint64_t> local;
            for (std::uint64_t m = lo; m < hi; ++m) gen(m, local);
            parts[static_cast<std::size_t>(c)] = std::move(local);
        }
        for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace kernels
}  // namespace modsys
