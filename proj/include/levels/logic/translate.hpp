#pragma once

#include <string>

#include "levels/logic/formula.hpp"

namespace levels::logic {

// Two-sorted stage formulas to one-sorted formulas about levels: stages
// become levels, before becomes ∈, found-at becomes ⊆.
Formula star_st(const Formula& f);

// Boolean variant: stages become boolean levels, Low x becomes x ∉ x, High x
// becomes x ∈ x, and found-at becomes (x ⊆ s ∨ complement(x) ⊆ s).
Formula star_bst(const Formula& f);

// Non-modal first-order formula to its modalization: atoms and existential
// quantifiers are prefixed by ◇.
Formula modalize(const Formula& f);

// Modal formula to a non-modal formula about the level s. s must not occur
// in f. Fresh level variables are t1, t2, ... avoiding every name in f.
Formula levelling(const Formula& f, const std::string& s);

// Eliminates ⟨earlier⟩ and ⟨later⟩ in favour of ◇ under linearity.
Formula mlt_bullet(const Formula& f);

// Replaces every ∈ by ∉ and vice versa, after expanding definitions.
Formula dual_swap(const Formula& f);

// Restricts every first-order quantifier to helow sets.
Formula helow_relativize(const Formula& f);

}  // namespace levels::logic
