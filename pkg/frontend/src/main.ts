import { ApiClient } from './api';
import { bootstrap } from './app';
import './style.css';

const params = new URLSearchParams(window.location.search);
const serviceUrl =
  params.get('service') ?? import.meta.env.VITE_SERVICE_URL ?? 'http://127.0.0.1:8000';

const root = document.getElementById('app');
if (root) {
  void bootstrap(root, new ApiClient(serviceUrl));
}
