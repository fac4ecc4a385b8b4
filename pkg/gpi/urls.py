from django.urls import path
from .views import (
    OracleView,
    CentralizedRunView,
    DistributedRunView,
    RunListView,
    RunDetailView,
    ExampleNetworkView,
)

urlpatterns = [
    path('oracle/', OracleView.as_view(), name='oracle'),
    path('runs/', RunListView.as_view(), name='run-list'),
    path('runs/centralized/', CentralizedRunView.as_view(), name='run-centralized'),
    path('runs/distributed/', DistributedRunView.as_view(), name='run-distributed'),
    path('runs/<uuid:run_id>/', RunDetailView.as_view(), name='run-detail'),
    path('examples/<str:name>/', ExampleNetworkView.as_view(), name='example-network'),
]
