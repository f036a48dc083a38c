#pragma once

// Umbrella header: categorial derivation with effect lists, embedded
// pi-calculus mobility, and the permutation-separability correspondence.

#include "catseq/category.hpp"
#include "catseq/derive.hpp"
#include "catseq/lexicon.hpp"
#include "catseq/perm.hpp"
#include "catseq/pi.hpp"
#include "catseq/render.hpp"
#include "catseq/rules.hpp"
#include "catseq/sexpr.hpp"
#include "catseq/strips.hpp"
#include "catseq/term.hpp"
