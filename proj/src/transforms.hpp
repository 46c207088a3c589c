#ifndef MHFA_TRANSFORMS_HPP
#define MHFA_TRANSFORMS_HPP

#include "automata.hpp"

namespace mhfa {

/// Single-head view of head `head` (1-based): every transition keeps only the
/// scanned symbol and move of that head, unioned over the other heads'
/// symbols, duplicates removed. The result has one head and the same states.
MultiHeadNFA project_head(const MultiHeadNFA& m, int head);

/// Adds head k+1 as a timer that moves right on every `slope`-th simulated
/// step (step residues live in the state component, names like `q@t3`).
/// A demanded timer move while scanning the right marker rejects ("timeout").
MultiHeadNFA add_timer_head(const MultiHeadNFA& m, int slope);

/// Adds k counter heads forming a base-(n+2) odometer: counter 1 advances
/// every |Q|-th simulated step; a counter reaching the right marker rewinds
/// to the left end (simulation frozen, names like `q@rw1`) and carries into
/// the next counter; a demanded advance of counter k past the right marker
/// rejects. The result halts on every path of every input.
MultiHeadNFA add_counter_heads(const MultiHeadNFA& m);

/// All-universal wrapper of a 1-head machine that accepts exactly the inputs
/// on which every computational path halts (reaching a terminal state and
/// getting stuck both count as halting).
TwoWayAFA halting_wrapper(const MultiHeadNFA& m);

}  // namespace mhfa

#endif
