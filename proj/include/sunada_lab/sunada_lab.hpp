#pragma once

#include "sunada_lab/congruence.hpp"
#include "sunada_lab/errors.hpp"
#include "sunada_lab/group.hpp"
#include "sunada_lab/intmat.hpp"
#include "sunada_lab/linear_groups.hpp"
#include "sunada_lab/modp.hpp"
#include "sunada_lab/orbifold.hpp"
#include "sunada_lab/product.hpp"
#include "sunada_lab/psl168.hpp"
#include "sunada_lab/report.hpp"
#include "sunada_lab/sunada.hpp"
