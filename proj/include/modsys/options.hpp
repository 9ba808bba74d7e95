#pragma once

#include "modsys/kernels.hpp"
#include "modsys/structures.hpp"

namespace modsys {

struct EvalOptions {
    Execution exec = default_execution();
    int ceiling = atom_ceiling();
};

}  // namespace modsys
