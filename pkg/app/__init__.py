"""
Hybrid beamforming for mmWave multi-user MISO with dynamic subarrays.
"""
