#pragma once

#include <chainent/errors.hpp>
#include <chainent/model.hpp>
#include <chainent/quadrature.hpp>
#include <chainent/symbol.hpp>
#include <chainent/exact_engine.hpp>
#include <chainent/theta.hpp>
#include <chainent/curve.hpp>
#include <chainent/asymptotics.hpp>
#include <chainent/rh_verify.hpp>
