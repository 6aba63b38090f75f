#pragma once

#include "ergolab/averaging.hpp"
#include "ergolab/cubes.hpp"
#include "ergolab/diagnostics.hpp"
#include "ergolab/limits.hpp"
#include "ergolab/seminorms.hpp"
#include "ergolab/system.hpp"
#include "ergolab/version.hpp"
