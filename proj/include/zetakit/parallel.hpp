#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace zk {

// Index-addressed parallel map. Each index writes only its own slot, so the
// result never depends on how work is split between threads.
class Parallel {
public:
    explicit Parallel(int workers = 1) : workers_(workers < 1 ? 1 : workers) {}
    int workers() const { return workers_; }

    template <class F>
    void for_each(std::size_t n, F&& f) const
    {
        if (workers_ == 1 || n < 2) {
            for (std::size_t i = 0; i < n; ++i) f(i);
            return;
        }
        std::atomic<std::size_t> next{0};
        std::exception_ptr err;
        std::mutex m;
        auto run = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(m);
                    if (!err) err = std::current_exception();
                }
            }
        };
        std::size_t nt = std::min<std::size_t>(workers_, n);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < nt; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    template <class T, class F>
    std::vector<T> map(std::size_t n, F&& f) const
    {
        std::vector<T> out(n);
        for_each(n, [&](std::size_t i) { out[i] = f(i); });
        return out;
    }

private:
    int workers_;
};

}  // namespace zk
