#pragma once

#include "sdca/coarray.hpp"
#include "sdca/covariance.hpp"
#include "sdca/harness.hpp"
#include "sdca/io.hpp"
#include "sdca/linalg.hpp"
#include "sdca/random.hpp"
#include "sdca/signal_model.hpp"
#include "sdca/span_test.hpp"
#include "sdca/ss_music.hpp"
