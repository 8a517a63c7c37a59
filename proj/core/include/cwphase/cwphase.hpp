#pragma once

#include "cwphase/error.hpp"
#include "cwphase/model.hpp"
#include "cwphase/oracle.hpp"
#include "cwphase/phase.hpp"
#include "cwphase/series.hpp"
#include "cwphase/stationary.hpp"
#include "cwphase/thermo.hpp"
