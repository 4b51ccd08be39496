#pragma once

#include "rfib/rational.hpp"
#include "rfib/polynomial.hpp"
#include "rfib/number_field.hpp"
#include "rfib/trees.hpp"
#include "rfib/leftbranch.hpp"
#include "rfib/recurrences.hpp"
#include "rfib/spectral.hpp"
#include "rfib/simulate.hpp"
#include "rfib/io.hpp"
#include "rfib/verify.hpp"
