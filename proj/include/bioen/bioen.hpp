#pragma once

#include "bioen/errors.hpp"
#include "bioen/gram.hpp"
#include "bioen/io.hpp"
#include "bioen/kernels.hpp"
#include "bioen/numerics.hpp"
#include "bioen/polynomials.hpp"
#include "bioen/quadrature.hpp"
#include "bioen/sampler.hpp"
#include "bioen/scaling.hpp"
#include "bioen/signed_log.hpp"
#include "bioen/special.hpp"
#include "bioen/verify.hpp"
#include "bioen/version.hpp"
