#pragma once

#include <limits>
#include <vector>

#include "cfdim/cantor.hpp"
#include "cfdim/continuants.hpp"

namespace cfdim {

/// Internal contract between the tree walker and its verifier passes.  The
/// walker calls enter() pre-order and leave() post-order on every node up to
/// the requested depth, handing out pointers into per-level state that stays
/// valid for the duration of the callback (and, for enter/leave pairing, for
/// the node's whole subtree).
struct CantorTree::Walk {
    struct Node {
        int level = 0;
        const DigitWord* digits = nullptr;        // a_1 .. a_level
        const Convergent* conv = nullptr;         // exact continuant state
        const std::vector<double>* log_mu = nullptr;  // ln mu_j, j = 0..m-1
        const PositionInfo* below = nullptr;      // branching at position level+1

        // Length bracket for this node's kind, in the log domain.
        double log_len_lo = 0.0;
        double log_len_hi = 0.0;
        // Sharper lower bounds that apply only at special orders; NaN when
        // not applicable.  growth_tail: the node right after the last growth
        // digit, measured against the growth-base continuant.  run_words:
        // block-end orders, measured against the word continuants of the
        // current run.
        double extra_lo_growth_tail = std::numeric_limits<double>::quiet_NaN();
        double extra_lo_run_words = std::numeric_limits<double>::quiet_NaN();

        // Exact interval of J_n; populated only when needs_geometry.
        const CylinderInterval* interval = nullptr;
    };

    bool needs_geometry = false;

    virtual void enter(const Node& node) = 0;
    virtual void leave(const Node& node) { (void)node; }
    virtual ~Walk() = default;
};

}  // namespace cfdim
