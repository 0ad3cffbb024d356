#pragma once

#include "lbraid/barcyc.hpp"
#include "lbraid/braiding.hpp"
#include "lbraid/classfun.hpp"
#include "lbraid/coeff.hpp"
#include "lbraid/dga.hpp"
#include "lbraid/error.hpp"
#include "lbraid/freegroup.hpp"
#include "lbraid/io.hpp"
