#pragma once

#include "immunoscan/baseline.hpp"
#include "immunoscan/detector.hpp"
#include "immunoscan/error.hpp"
#include "immunoscan/monitor.hpp"
#include "immunoscan/panel.hpp"
#include "immunoscan/preprocess.hpp"
#include "immunoscan/report.hpp"
#include "immunoscan/rng.hpp"
#include "immunoscan/synth.hpp"
#include "immunoscan/trials.hpp"
