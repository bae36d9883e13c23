#pragma once

#define FFRSIM_VERSION "0.1.0"
