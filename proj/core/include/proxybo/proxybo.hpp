#pragma once

#include "proxybo/acquisition.hpp"
#include "proxybo/engine.hpp"
#include "proxybo/error.hpp"
#include "proxybo/guidance.hpp"
#include "proxybo/metrics.hpp"
#include "proxybo/proxies.hpp"
#include "proxybo/rng.hpp"
#include "proxybo/space.hpp"
#include "proxybo/stats.hpp"
#include "proxybo/surrogate.hpp"
#include "proxybo/synthetic.hpp"
#include "proxybo/table.hpp"
#include "proxybo/tinynet.hpp"
