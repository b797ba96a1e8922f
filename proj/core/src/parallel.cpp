/**
 * @file parallel.cpp
 * @brief Worker-count resolution.
 */
#include "specular/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace specular {

namespace {
std::atomic<int> g_threads{0};
}

void set_thread_count(int n) { g_threads.store(n < 0 ? 0 : n); }

int default_thread_count() {
    if (const int n = g_threads.load(); n > 0) return n;
    if (const char* env = std::getenv("SPECULAR_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace specular
