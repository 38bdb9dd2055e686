#pragma once

#include <cstddef>

#include "levels/chfset.hpp"
#include "levels/hfset.hpp"
#include "levels/models.hpp"

// Mutual interpretations of the pure and the complemented hierarchies. In
// the pure hierarchy ∅ serves as a flag for "high"; in the complemented one
// the map h sends every set to a helow set.
namespace levels::interp {

// z_0 = ∅, z_{n+1} = {z_n}.
HFSet zermelo(std::size_t n);
bool is_zermelo(HFSet a);
// The same ladder built from LOW sets, and the one starting from V.
CHFSet zermelo_chf(std::size_t n);
CHFSet v_chf(std::size_t n);
bool is_zermelo_chf(CHFSet a);

// {a} on Zermelo numbers, identity elsewhere. A bijection onto HF ∖ {∅}.
HFSet f_j(HFSet a);
// Inverse of f_j; a must be nonempty.
HFSet f_j_inv(HFSet a);

// x ∈• a iff (f_j(x) ∈ a ↔ ∅ ∉ a).
bool mem_star(HFSet x, HFSet a);
// Toggles the ∅ flag.
HFSet star_complement(HFSet a);
// W_γ = {f_j(x) : x ⊆ W_β ∪ {∅} for some β < γ}; γ <= 3.
HFSet w_level(std::size_t gamma);

// The canonical isomorphism between (CHF, ∈) and (HF, ∈•).
HFSet encode_star(CHFSet c);
CHFSet decode_star(HFSet a);

// h(a) = {f_j(h(x)) : x ∈ a} for low a, {f_j(h(x)) : x ∉ a} ∪ {∅} for high a.
// Computed among CHF sets, where the values are helow, then mirrored as HF.
HFSet h_bij(CHFSet c);
CHFSet h_bij_chf(CHFSet c);  // the helow value itself
// Inverse of h by recursion on rank. Every HF set is the mirror of a helow set.
CHFSet h_inv(HFSet a);

// The ∘-interpretation of f_j among CHF sets: {x}° on Zermelo° numbers.
CHFSet f_j_circ(CHFSet c);

// x ∈° a iff h(x) ∈ h(a).
bool mem_circ(CHFSet x, CHFSet a);
// HF arguments are read as the CHF sets they denote through h.
bool mem_circ(HFSet x, HFSet a);

// h computed inside (HF, ∈•), with every notion read through ∈•.
HFSet h_star(HFSet a);

// Exhaustive checks over CHF sets of depth < d and HF sets of depth <= d, d <= 3.
models::CheckReport verify_round_trips(std::size_t d);

}  // namespace levels::interp
