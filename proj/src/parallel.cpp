#include "momentnet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace momentnet {

unsigned default_jobs() {
    if (const char* env = std::getenv("MOMENTNET_JOBS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace momentnet
