#pragma once

#include <complex>

#include "doctest.h"

// Complex closeness check with an absolute tolerance.
#define CHECK_CPLX(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))
#define REQUIRE_CPLX(a, b, tol) REQUIRE(std::abs((a) - (b)) <= (tol))
