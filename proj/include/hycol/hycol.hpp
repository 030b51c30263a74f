#ifndef HYCOL_HYCOL_HPP
#define HYCOL_HYCOL_HPP

#include "hycol/assignment.hpp"
#include "hycol/blocktree.hpp"
#include "hycol/coupling.hpp"
#include "hycol/errors.hpp"
#include "hycol/graph.hpp"
#include "hycol/hypergraph.hpp"
#include "hycol/oracle.hpp"
#include "hycol/projection.hpp"
#include "hycol/rng.hpp"
#include "hycol/sampler.hpp"
#include "hycol/workbench.hpp"

#endif // HYCOL_HYCOL_HPP
