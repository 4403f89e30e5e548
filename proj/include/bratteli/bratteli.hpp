#pragma once

#include "bigint.hpp"
#include "diagram.hpp"
#include "dimension_group.hpp"
#include "equivalence.hpp"
#include "error.hpp"
#include "generators.hpp"
#include "io.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "quadratic.hpp"
#include "simplicity.hpp"
#include "towers.hpp"
#include "vershik.hpp"
