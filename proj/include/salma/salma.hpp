#pragma once

#include "salma/analysis.hpp"
#include "salma/io.hpp"
#include "salma/mask.hpp"
#include "salma/penalty.hpp"
#include "salma/signal.hpp"
#include "salma/simgen.hpp"
#include "salma/solver.hpp"
#include "salma/stft.hpp"
#include "salma/tuning.hpp"
