#ifndef RMM_RMM_HPP
#define RMM_RMM_HPP

#include "rmm/counting.hpp"
#include "rmm/decomposition.hpp"
#include "rmm/generator.hpp"
#include "rmm/instance.hpp"
#include "rmm/oracle.hpp"
#include "rmm/popularity.hpp"
#include "rmm/solver.hpp"
#include "rmm/switching.hpp"

#endif  // RMM_RMM_HPP
