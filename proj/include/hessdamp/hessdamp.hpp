#pragma once

#include "hessdamp/agm.hpp"
#include "hessdamp/harness.hpp"
#include "hessdamp/kernels.hpp"
#include "hessdamp/ode.hpp"
#include "hessdamp/oracle.hpp"
#include "hessdamp/params.hpp"
#include "hessdamp/pgm.hpp"
#include "hessdamp/trace.hpp"
