#include "modsys/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace modsys {

Execution default_execution() {
    static const Execution value = [] {
        if (const char* env = std::getenv("MODSYS_SERIAL")) {
            if (std::strcmp(env, "0") != 0 && env[0] != '\0') return Execution::Serial;
        }
        return Execution::Parallel;
    }();
    return value;
}

}  // namespace modsys
