#pragma once

// Umbrella header for the casetree toolkit: parsing and serialization of
// the indentation-based causal-tree text form, triplet decomposition, fuzzy
// triplet matching, and clinician-preference-weighted evaluation metrics.

#include "casetree/corpus.hpp"
#include "casetree/diagnostics.hpp"
#include "casetree/error.hpp"
#include "casetree/match.hpp"
#include "casetree/metrics.hpp"
#include "casetree/parallel.hpp"
#include "casetree/parse.hpp"
#include "casetree/report.hpp"
#include "casetree/serialize.hpp"
#include "casetree/thesaurus.hpp"
#include "casetree/tree.hpp"
#include "casetree/triplets.hpp"
#include "casetree/unicode.hpp"
#include "casetree/validate.hpp"
