// Deterministic parallel map: each index writes its own slot, so results are
// identical with parallelism on or off.
#ifndef CUBICALC_PARALLEL_HPP
#define CUBICALC_PARALLEL_HPP

#include <future>
#include <vector>

namespace cubicalc {

template <class F>
void par_for(int count, bool parallel, F&& body) {
    if (!parallel || count < 4) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    unsigned workers = std::max(2u, std::thread::hardware_concurrency());
    std::vector<std::future<void>> futs;
    int chunk = (count + int(workers) - 1) / int(workers);
    for (unsigned w = 0; w < workers; ++w) {
        int lo = int(w) * chunk, hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [lo, hi, &body]() {
            for (int i = lo; i < hi; ++i) body(i);
        }));
    }
    for (auto& f : futs) f.get();
}

}  // namespace cubicalc

#endif
