#pragma once

#include "holex/lp.hpp"
#include "holex/world_semantics.hpp"

#include <string>
#include <vector>

namespace holex::detail {

std::vector<LpRow> lp_rows(const ConstraintSystem& cs, const std::vector<bool>* active = nullptr);

/// Labels of an irreducible infeasible subset of the rule rows.
std::vector<std::string> infeasible_core(const ConstraintSystem& cs, const LpOptions& lp);

[[noreturn]] void throw_infeasible(const ConstraintSystem& cs, const LpOptions& lp);

}  // namespace holex::detail
