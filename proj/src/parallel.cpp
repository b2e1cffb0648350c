#include "ineqlab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace ineqlab {

int thread_count() {
    if (const char* env = std::getenv("INEQLAB_THREADS")) {
        try {
            const int n = std::stoi(env);
            if (n > 0) return n;
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace ineqlab
