#pragma once

#include "syntax.hpp"
#include "named.hpp"
#include "lattice.hpp"
#include "renaming.hpp"
#include "semantics.hpp"
#include "slicing.hpp"
#include "causality.hpp"
#include "verify.hpp"
