#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace turan::detail {

// Runs body(begin, end) over contiguous chunks of [0, count), one chunk per
// hardware thread, and waits for all of them. Exceptions propagate.
template <class Body>
void parallel_chunks(std::size_t count, Body body) {
    const std::size_t workers = std::max(1U, std::thread::hardware_concurrency());
    if (workers == 1 || count < 2 * workers) {
        body(std::size_t{0}, count);
        return;
    }
    const std::size_t chunk = (count + workers - 1) / workers;
    std::vector<std::future<void>> parts;
    for (std::size_t b = 0; b < count; b += chunk)
        parts.push_back(std::async(std::launch::async, [&body, b, count, chunk] { body(b, std::min(count, b + chunk)); }));
    for (auto& p : parts) p.get();
}

}  // namespace turan::detail
