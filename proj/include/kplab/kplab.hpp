#pragma once

#include "kplab/error.hpp"
#include "kplab/expression.hpp"
#include "kplab/symbols.hpp"
#include "kplab/waves.hpp"
#include "kplab/parallel.hpp"
#include "kplab/bloch.hpp"
#include "kplab/collisions.hpp"
#include "kplab/asymptotics.hpp"
#include "kplab/bands.hpp"
#include "kplab/io.hpp"
#include "kplab/svg.hpp"
