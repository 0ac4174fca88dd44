#pragma once

#include "b5gee/channel.hpp"
#include "b5gee/config.hpp"
#include "b5gee/core.hpp"
#include "b5gee/link_metrics.hpp"
#include "b5gee/power.hpp"
#include "b5gee/report.hpp"
#include "b5gee/scenario.hpp"
