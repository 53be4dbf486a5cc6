#pragma once

namespace tenseq::cli {

// Exit codes: 0 success, 1 solver timeout or failure, 2 usage or input error.
int run(int argc, char** argv);

}  // namespace tenseq::cli
