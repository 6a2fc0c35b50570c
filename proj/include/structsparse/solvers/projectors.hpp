#pragma once

#include <algorithm>

#include "structsparse/models/dispersive.hpp"
#include "structsparse/models/ksparse.hpp"
#include "structsparse/models/rc_tree.hpp"
#include "structsparse/solvers/common.hpp"

namespace structsparse::solvers {

inline Projector ksparse_projector() {
  return [](const Signal& x, Index budget) {
    return models::project_ksparse(x, std::min(budget, x.size()));
  };
}

inline Projector dispersive_projector(Index delta) {
  return [delta](const Signal& x, Index budget) {
    const models::DispersiveModel m{std::clamp<Index>(budget, 1, x.size()), delta, x.size()};
    return models::project_dispersive(x, m).signal;
  };
}

inline Projector rc_tree_projector(Tree tree) {
  return [tree = std::move(tree)](const Signal& x, Index budget) {
    return models::project_rc_tree(x, models::TreeModel{tree, budget}).signal;
  };
}

}  // namespace structsparse::solvers
