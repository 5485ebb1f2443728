#pragma once

#include "kcenter/core.hpp"
#include "kcenter/datagen.hpp"
#include "kcenter/eim.hpp"
#include "kcenter/experiment.hpp"
#include "kcenter/gonzalez.hpp"
#include "kcenter/mapreduce.hpp"
#include "kcenter/mrg.hpp"
#include "kcenter/oracle.hpp"
#include "kcenter/rng.hpp"
