#pragma once

#include "pamap/plmap.hpp"

namespace pamap::testutil {

// classical full tent map on [0,1]
inline PLMap tent() {
    return PLMap::from_nodes({{rat(0), rat(0)}, {rat(1, 2), rat(1)}, {rat(1), rat(0)}}, rat(0),
                             rat(1));
}

}  // namespace pamap::testutil
