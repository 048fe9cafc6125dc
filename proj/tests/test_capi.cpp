#include "lorentz_zeta.h"
int main() { return 0; }
