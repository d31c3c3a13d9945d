#pragma once

#include "qcloud/qsim/density.hpp"
#include "qcloud/qsim/gates.hpp"
#include "qcloud/qsim/statevector.hpp"
#include "qcloud/qsim/types.hpp"
