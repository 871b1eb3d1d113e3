#include "palab.h"

int main(int argc, char** argv) { return palab_run(argc, argv); }
