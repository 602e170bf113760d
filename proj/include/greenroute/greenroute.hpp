#pragma once

#include "greenroute/rational.hpp"
#include "greenroute/model.hpp"
#include "greenroute/instance_io.hpp"
#include "greenroute/formulation.hpp"
#include "greenroute/solver.hpp"
#include "greenroute/validate.hpp"
#include "greenroute/lpexport.hpp"
#include "greenroute/report_io.hpp"
#include "greenroute/generator.hpp"
