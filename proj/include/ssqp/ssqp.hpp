#pragma once

#include "ssqp/errors.hpp"
#include "ssqp/scalar.hpp"
#include "ssqp/polyhedron.hpp"
#include "ssqp/geometry.hpp"
#include "ssqp/problem.hpp"
#include "ssqp/smoothing.hpp"
#include "ssqp/model.hpp"
#include "ssqp/subproblems.hpp"
#include "ssqp/kkt.hpp"
#include "ssqp/driver.hpp"
#include "ssqp/problems.hpp"
