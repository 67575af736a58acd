#include "ffm/parallel.hpp"

#include <atomic>

namespace ffm {

namespace {
std::atomic<unsigned> g_threads{0};
}

unsigned default_thread_count() {
    unsigned t = g_threads.load();
    if (t != 0) return t;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void set_default_thread_count(unsigned t) { g_threads.store(t); }

}  // namespace ffm
