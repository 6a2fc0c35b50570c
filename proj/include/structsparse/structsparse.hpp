#pragma once

#include "structsparse/core/cg.hpp"
#include "structsparse/core/errors.hpp"
#include "structsparse/core/haar.hpp"
#include "structsparse/core/index_bitset.hpp"
#include "structsparse/core/linear_operator.hpp"
#include "structsparse/core/metrics.hpp"
#include "structsparse/core/pgm.hpp"
#include "structsparse/core/random.hpp"
#include "structsparse/core/signal.hpp"
#include "structsparse/core/tree.hpp"
#include "structsparse/models/dispersive.hpp"
#include "structsparse/models/groups.hpp"
#include "structsparse/models/ksparse.hpp"
#include "structsparse/models/rc_tree.hpp"
#include "structsparse/prox/hierarchical.hpp"
#include "structsparse/prox/latent.hpp"
#include "structsparse/prox/norms.hpp"
#include "structsparse/solvers/admm.hpp"
#include "structsparse/solvers/cosamp.hpp"
#include "structsparse/solvers/fista.hpp"
#include "structsparse/solvers/iht.hpp"
#include "structsparse/solvers/primal_dual.hpp"
#include "structsparse/solvers/projectors.hpp"
#include "structsparse/submodular/lovasz.hpp"
#include "structsparse/submodular/maxflow.hpp"
#include "structsparse/submodular/mm.hpp"
#include "structsparse/submodular/prox_lovasz.hpp"
#include "structsparse/submodular/set_function.hpp"
#include "structsparse/submodular/sfm.hpp"
#include "structsparse/harness/experiments.hpp"
#include "structsparse/harness/generators.hpp"
#include "structsparse/harness/report.hpp"
#include "structsparse/harness/spec.hpp"
