# Core modules for WeylSteer
