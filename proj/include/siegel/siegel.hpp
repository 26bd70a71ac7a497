#pragma once

#include "arith.hpp"
#include "halfint.hpp"
#include "exactnum.hpp"
#include "localform.hpp"
#include "poly.hpp"
#include "gksiegel.hpp"
#include "density.hpp"
#include "siegelmass.hpp"
#include "eisenstein.hpp"
#include "io.hpp"
#include "verify.hpp"
