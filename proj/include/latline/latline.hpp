#pragma once

#include "latline/block_function.hpp"
#include "latline/block_ops.hpp"
#include "latline/constructions.hpp"
#include "latline/eps_set.hpp"
#include "latline/equivalence.hpp"
#include "latline/errors.hpp"
#include "latline/hom.hpp"
#include "latline/hom_checks.hpp"
#include "latline/io.hpp"
#include "latline/polyline.hpp"
#include "latline/rational.hpp"
