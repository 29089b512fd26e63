#pragma once

#include "mpst/types.hpp"

namespace mpst {

/// Synchronous (no-reordering) subtyping: the subtype may offer more
/// external branches and select fewer internal ones, with payload sorts
/// coercible supertype-to-subtype on receives and subtype-to-supertype on
/// sends. Decided as a simulation over the two machines with a set of
/// assumed state pairs standing in for the coinductive hypothesis.
bool check_sync_subtype(const LocalRef& sub, const LocalRef& sup, const SortTable& sorts = {});

}  // namespace mpst
