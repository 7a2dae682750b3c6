#pragma once

#define FRACWEYL_VERSION_MAJOR 1
#define FRACWEYL_VERSION_MINOR 0
#define FRACWEYL_VERSION_PATCH 0
#define FRACWEYL_VERSION "1.0.0"
