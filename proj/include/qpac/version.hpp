#pragma once

#define QPAC_VERSION "0.1.0"
