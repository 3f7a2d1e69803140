# Services test module 