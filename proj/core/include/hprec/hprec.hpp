#pragma once

#include "hprec/admm.hpp"
#include "hprec/channel.hpp"
#include "hprec/error.hpp"
#include "hprec/learn.hpp"
#include "hprec/matcore.hpp"
#include "hprec/objective.hpp"
#include "hprec/optim.hpp"
#include "hprec/schedule_io.hpp"
